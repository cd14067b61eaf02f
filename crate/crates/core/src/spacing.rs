use crate::error::{Error, Result};

/// Relative tolerance on `sum(h) == D`.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Ordered hop lengths of a linear chain. `hops()[0]` is the hop between
/// node 1 and the sink, `hops()[i - 1]` the hop between node `i` and node
/// `i - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingVector {
    hops: Vec<f64>,
    total: f64,
}

impl SpacingVector {
    /// Builds a spacing whose link length is the sum of `hops`.
    pub fn new(hops: Vec<f64>) -> Result<Self> {
        check_hops(&hops)?;
        let total = hops.iter().sum();
        Ok(Self { hops, total })
    }

    /// Builds a spacing that must span `total` meters. The sum is checked to
    /// [`SUM_TOLERANCE`] and the hops are then rescaled onto `total`.
    pub fn with_total(hops: Vec<f64>, total: f64) -> Result<Self> {
        check_hops(&hops)?;
        check_total(total)?;
        let sum: f64 = hops.iter().sum();
        if (sum - total).abs() > SUM_TOLERANCE * total {
            return Err(Error::invalid(format!(
                "hops sum to {sum}, expected {total}"
            )));
        }
        Ok(Self::rescaled(hops, total))
    }

    /// `k` hops of `total / k` each.
    pub fn equal(k: usize, total: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("hop count must be >= 1"));
        }
        check_total(total)?;
        Ok(Self {
            hops: vec![total / k as f64; k],
            total,
        })
    }

    /// Hops proportional to positive `weights`, scaled to span `total`.
    pub fn from_weights(weights: &[f64], total: f64) -> Result<Self> {
        check_hops(weights)?;
        check_total(total)?;
        Ok(Self::rescaled(weights.to_vec(), total))
    }

    fn rescaled(mut hops: Vec<f64>, total: f64) -> Self {
        let sum: f64 = hops.iter().sum();
        let scale = total / sum;
        for h in &mut hops {
            *h *= scale;
        }
        Self { hops, total }
    }

    pub fn hops(&self) -> &[f64] {
        &self.hops
    }

    /// Number of hops, which is also the number of nodes `K`.
    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    /// Link length `D`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Hop between node `i` (1-based) and its sink-side neighbour.
    pub fn hop(&self, i: usize) -> Result<f64> {
        if i == 0 || i > self.hops.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                count: self.hops.len(),
            });
        }
        Ok(self.hops[i - 1])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.hops
    }
}

fn check_hops(hops: &[f64]) -> Result<()> {
    if hops.is_empty() {
        return Err(Error::invalid("spacing must contain at least one hop"));
    }
    if let Some(h) = hops.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
        return Err(Error::invalid(format!(
            "hop distances must be finite and > 0, got {h}"
        )));
    }
    Ok(())
}

fn check_total(total: f64) -> Result<()> {
    if total.is_finite() && total > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "link distance D must be finite and > 0, got {total}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_nonpositive() {
        assert!(SpacingVector::new(vec![]).is_err());
        assert!(SpacingVector::new(vec![1.0, 0.0]).is_err());
        assert!(SpacingVector::new(vec![1.0, -2.0]).is_err());
        assert!(SpacingVector::equal(0, 10.0).is_err());
        assert!(SpacingVector::equal(2, 0.0).is_err());
    }

    #[test]
    fn with_total_checks_sum() {
        assert!(SpacingVector::with_total(vec![50.0, 50.0], 100.0).is_ok());
        assert!(SpacingVector::with_total(vec![50.0, 50.1], 100.0).is_err());
        let s = SpacingVector::with_total(vec![50.0, 50.0 + 1e-8], 100.0).unwrap();
        assert_eq!(s.total(), 100.0);
        assert!((s.hops().iter().sum::<f64>() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn hop_indexing_is_one_based() {
        let s = SpacingVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.hop(1).unwrap(), 1.0);
        assert_eq!(s.hop(3).unwrap(), 3.0);
        assert!(matches!(s.hop(0), Err(Error::IndexOutOfRange { .. })));
        assert!(s.hop(4).is_err());
        assert_eq!(s.total(), 6.0);
    }

    #[test]
    fn from_weights_normalizes() {
        let s = SpacingVector::from_weights(&[1.0 / 3.0, 0.5, 1.0], 100.0).unwrap();
        let expect = [200.0 / 11.0, 300.0 / 11.0, 600.0 / 11.0];
        for (h, e) in s.hops().iter().zip(expect) {
            assert!((h - e).abs() < 1e-12 * e);
        }
    }
}
