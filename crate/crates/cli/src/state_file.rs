//! `KRYV1` binary state files: the magic bytes, the dimension as a
//! little-endian `u64`, then `dim` pairs of little-endian `f64` `(re, im)`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use krylov_echo::{Complex64, ComplexState};

pub const MAGIC: &[u8; 5] = b"KRYV1";

pub fn write_state_to<W: Write>(mut w: W, state: &ComplexState) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(state.dim() as u64).to_le_bytes())?;
    for z in state.amplitudes() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_state_from<R: Read>(mut r: R) -> Result<ComplexState> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic).context("truncated state file header")?;
    if &magic != MAGIC {
        bail!("not a KRYV1 state file (magic {:?})", String::from_utf8_lossy(&magic));
    }
    let mut word = [0u8; 8];
    r.read_exact(&mut word).context("truncated state file header")?;
    let dim = u64::from_le_bytes(word);
    ensure!(dim >= 1, "state file declares dimension 0");
    let dim = usize::try_from(dim).context("state dimension does not fit in memory")?;
    let mut amplitudes = Vec::new();
    for i in 0..dim {
        r.read_exact(&mut word).with_context(|| format!("state file ends at amplitude {i} of {dim}"))?;
        let re = f64::from_le_bytes(word);
        r.read_exact(&mut word).with_context(|| format!("state file ends at amplitude {i} of {dim}"))?;
        amplitudes.push(Complex64::new(re, f64::from_le_bytes(word)));
    }
    let mut rest = [0u8; 1];
    ensure!(r.read(&mut rest)? == 0, "trailing bytes after {dim} amplitudes");
    Ok(ComplexState::new(amplitudes)?)
}

pub fn write_state(path: &Path, state: &ComplexState) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_state_to(BufWriter::new(file), state).with_context(|| format!("writing {}", path.display()))
}

pub fn read_state(path: &Path) -> Result<ComplexState> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_state_from(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}
