use crate::error::{Error, Result};

/// Evaluates `energy` at K = 1..=k_max and returns the cheapest `(K, E)`,
/// preferring the smaller K on ties.
pub fn grid_search_hops<F>(mut energy: F, k_max: usize) -> Result<(usize, f64)>
where
    F: FnMut(f64) -> f64,
{
    if k_max == 0 {
        return Err(Error::invalid("k_max must be >= 1"));
    }
    let mut best = (1, energy(1.0));
    for k in 2..=k_max {
        let e = energy(k as f64);
        if e < best.1 {
            best = (k, e);
        }
    }
    Ok(best)
}

/// Scans `lo, lo + step, ...` up to `hi` and returns the argmin and its
/// value. Ties go to the smaller abscissa.
pub fn grid_search_continuous<F>(mut f: F, lo: f64, hi: f64, step: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    if !lo.is_finite() || !hi.is_finite() || step.is_nan() || step <= 0.0 || hi < lo {
        return Err(Error::invalid(format!(
            "bad grid [{lo}, {hi}] with step {step}"
        )));
    }
    let points = ((hi - lo) / step).floor() as usize;
    let mut best = (lo, f(lo));
    for j in 1..=points {
        let x = lo + j as f64 * step;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}
