//! Number formatting shared by every CSV and human-readable report.

/// Six significant digits, trailing zeros kept: fixed notation for
/// magnitudes in `[1e-4, 1e6)`, otherwise `d.ddddde[-]x`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific formatting always carries an exponent");
    if (-4..6).contains(&exponent) {
        let decimals = (5 - exponent) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(31.622776601683793), "31.6228");
        assert_eq!(sig6(52.91502622129181), "52.9150");
        assert_eq!(sig6(100.0), "100.000");
        assert_eq!(sig6(59.0), "59.0000");
        assert_eq!(sig6(1.51296e-3), "0.00151296");
        assert_eq!(sig6(3.15904e-3), "0.00315904");
        assert_eq!(sig6(25.6e-6), "2.56000e-5");
        assert_eq!(sig6(999999.7), "1.00000e6");
        assert_eq!(sig6(9.999996), "10.0000");
        assert_eq!(sig6(-0.5), "-0.500000");
        assert_eq!(sig6(0.0), "0.00000");
    }
}
