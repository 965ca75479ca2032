//! Time markers read off a sampled error curve.
//!
//! `t_exp` is the first grid time from which the infidelity stays above
//! [`EXP_THRESHOLD`] for [`SUSTAIN`] consecutive points. `t_col` is the left end
//! of the grid interval with the steepest finite-difference drop of the echo.

pub const EXP_THRESHOLD: f64 = 1e-10;
pub const SUSTAIN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeTimes {
    pub t_exp: Option<f64>,
    pub t_col: Option<f64>,
    /// Grid indices of the two markers.
    pub i_exp: Option<usize>,
    pub i_col: Option<usize>,
}

pub fn first_sustained_crossing(eps: &[f64], threshold: f64, sustain: usize) -> Option<usize> {
    if sustain == 0 || eps.len() < sustain {
        return None;
    }
    (0..=eps.len() - sustain).find(|&i| eps[i..i + sustain].iter().all(|&e| e > threshold))
}

/// Index `i` maximizing `(echo[i] − echo[i+1]) / (t[i+1] − t[i])`, if any
/// interval drops at all.
pub fn steepest_drop(times: &[f64], echo: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in 0..times.len().saturating_sub(1) {
        let rate = (echo[i] - echo[i + 1]) / (times[i + 1] - times[i]);
        if rate > 0.0 && best.is_none_or(|(_, r)| rate > r) {
            best = Some((i, rate));
        }
    }
    best.map(|(i, _)| i)
}

pub fn regime_times(times: &[f64], echo: &[f64], eps: &[f64]) -> RegimeTimes {
    let i_exp = first_sustained_crossing(eps, EXP_THRESHOLD, SUSTAIN);
    let i_col = steepest_drop(times, echo);
    RegimeTimes { t_exp: i_exp.map(|i| times[i]), t_col: i_col.map(|i| times[i]), i_exp, i_col }
}
