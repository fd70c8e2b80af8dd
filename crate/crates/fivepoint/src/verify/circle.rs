//! Arc-length distance on a circle of given circumference.

use super::VerifyError;

/// Geodesic distance between positions `u`, `v` on a circle of length `len`:
/// min(|u−v|, len−|u−v|). Positions must lie in [0, len).
pub fn circle_distance(len: f64, u: f64, v: f64) -> Result<f64, VerifyError> {
    if !(len > 0.0) || !len.is_finite() {
        return Err(VerifyError::BadInput(format!(
            "circle length must be positive and finite, got {len}"
        )));
    }
    for (name, x) in [("u", u), ("v", v)] {
        if !x.is_finite() || x < 0.0 || x >= len {
            return Err(VerifyError::BadInput(format!(
                "position {name}={x} outside [0, {len})"
            )));
        }
    }
    let t = (u - v).abs();
    Ok(t.min(len - t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraparound() {
        assert_eq!(circle_distance(5.0, 0.0, 4.0).unwrap(), 1.0);
    }

    #[test]
    fn antipodal() {
        assert_eq!(circle_distance(5.0, 0.0, 2.5).unwrap(), 2.5);
    }

    #[test]
    fn interior() {
        assert_eq!(circle_distance(6.0, 1.0, 4.0).unwrap(), 3.0);
    }

    #[test]
    fn symmetric_and_zero() {
        assert_eq!(circle_distance(7.0, 3.0, 3.0).unwrap(), 0.0);
        assert_eq!(
            circle_distance(7.0, 1.25, 6.0).unwrap(),
            circle_distance(7.0, 6.0, 1.25).unwrap()
        );
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(circle_distance(0.0, 0.0, 0.0).is_err());
        assert!(circle_distance(-1.0, 0.0, 0.0).is_err());
        assert!(circle_distance(5.0, 5.0, 0.0).is_err());
        assert!(circle_distance(5.0, -0.1, 0.0).is_err());
        assert!(circle_distance(f64::NAN, 0.0, 0.0).is_err());
    }
}
