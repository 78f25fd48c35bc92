//! Calibration of the overlap exponent.
//!
//! The exponent `m` in the clustering objective controls how wide the
//! dual-assignment region between two adjacent cluster means becomes.
//! For two 1-D means at distance `l` apart, the points in between split into
//! an exclusive interval on each side and a shared interval in the middle;
//! `r_overlap` is the shared interval's length relative to `l`. The two
//! parameters determine each other:
//!
//! ```text
//! m = log2(((1 + r) / (1 - r))^2 + 1)        r = 1 - 2 / (1 + sqrt(2^m - 1))
//! ```
//!
//! `m = 1` is hard clustering (`r = 0`); larger `m` widens the overlap.

use crate::error::{Error, Result};

/// A consistent `(m, r_overlap)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSpec {
    /// Objective exponent, at least 1.
    pub m: f64,
    /// Relative overlap length in `[0, 1)`.
    pub r_overlap: f64,
}

impl OverlapSpec {
    pub fn from_overlap(r_overlap: f64) -> Result<Self> {
        Ok(Self {
            m: m_from_overlap(r_overlap)?,
            r_overlap,
        })
    }

    pub fn from_m(m: f64) -> Result<Self> {
        Ok(Self {
            m,
            r_overlap: overlap_from_m(m)?,
        })
    }
}

/// Lengths of the three sub-intervals between two adjacent 1-D means:
/// exclusive left, shared middle, exclusive right. The exclusive sides have
/// equal length, and `2 * l_exclusive + l_overlap = l_total`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalGeometry {
    pub l_exclusive: f64,
    pub l_overlap: f64,
    pub l_total: f64,
}

/// Exponent that produces the requested overlap level.
pub fn m_from_overlap(r_overlap: f64) -> Result<f64> {
    if !r_overlap.is_finite() || !(0.0..1.0).contains(&r_overlap) {
        return Err(Error::OverlapOutOfRange(r_overlap));
    }
    let ratio = (1.0 + r_overlap) / (1.0 - r_overlap);
    Ok((ratio * ratio + 1.0).log2())
}

/// Overlap level produced by the given exponent. Inverse of [`m_from_overlap`].
pub fn overlap_from_m(m: f64) -> Result<f64> {
    validate_exponent(m)?;
    Ok(1.0 - 2.0 / (1.0 + (2f64.powf(m) - 1.0).sqrt()))
}

/// Sub-interval lengths induced by exponent `m` on an interval of length
/// `l_total` between two adjacent means.
pub fn interval_geometry(m: f64, l_total: f64) -> Result<IntervalGeometry> {
    validate_exponent(m)?;
    if !l_total.is_finite() || l_total <= 0.0 {
        return Err(Error::NonPositiveLength(l_total));
    }
    let l_exclusive = l_total / (1.0 + (2f64.powf(m) - 1.0).sqrt());
    Ok(IntervalGeometry {
        l_exclusive,
        l_overlap: l_total - 2.0 * l_exclusive,
        l_total,
    })
}

pub(crate) fn validate_exponent(m: f64) -> Result<()> {
    if !m.is_finite() || m < 1.0 {
        return Err(Error::ExponentOutOfRange(m));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_from_overlap_reference_values() {
        // r = 1/3 and r = 1/2 hit exactly log2(5) and log2(10); r = 0 is hard
        // clustering with m = 1.
        assert!((m_from_overlap(1.0 / 3.0).unwrap() - 5f64.log2()).abs() < 1e-12);
        assert!((m_from_overlap(0.5).unwrap() - 10f64.log2()).abs() < 1e-12);
        assert_eq!(m_from_overlap(0.0).unwrap(), 1.0);
    }

    #[test]
    fn overlap_from_exponent_reference_values() {
        assert_eq!(overlap_from_m(1.0).unwrap(), 0.0);
        assert!((overlap_from_m(5f64.log2()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let r2 = overlap_from_m(2.0).unwrap();
        assert!((r2 - (1.0 - 2.0 / (1.0 + 3f64.sqrt()))).abs() < 1e-15);
        assert!((r2 - 0.2679).abs() < 1e-4);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            m_from_overlap(-0.1),
            Err(Error::OverlapOutOfRange(_))
        ));
        assert!(matches!(
            m_from_overlap(1.0),
            Err(Error::OverlapOutOfRange(_))
        ));
        assert!(matches!(
            m_from_overlap(f64::NAN),
            Err(Error::OverlapOutOfRange(_))
        ));
        assert!(matches!(
            overlap_from_m(0.5),
            Err(Error::ExponentOutOfRange(_))
        ));
        assert!(matches!(
            interval_geometry(2.0, 0.0),
            Err(Error::NonPositiveLength(_))
        ));
        assert!(matches!(
            interval_geometry(2.0, -1.0),
            Err(Error::NonPositiveLength(_))
        ));
    }

    #[test]
    fn geometry_reference_values() {
        // m = log2(5): all three sub-intervals are equal thirds.
        let g = interval_geometry(5f64.log2(), 1.0).unwrap();
        assert!((g.l_exclusive - 1.0 / 3.0).abs() < 1e-12);
        assert!((g.l_overlap - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(g.l_total, 1.0);

        // m = 1: hard clustering, the shared interval is empty.
        let g = interval_geometry(1.0, 1.0).unwrap();
        assert_eq!(g.l_exclusive, 0.5);
        assert_eq!(g.l_overlap, 0.0);

        // m = log2(10) doubles the overlap fraction to one half.
        let g = interval_geometry(10f64.log2(), 2.0).unwrap();
        assert!((g.l_exclusive - 0.5).abs() < 1e-12);
        assert!((g.l_overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometry_partitions_the_interval() {
        for m in [1.0, 1.5, 2.0, 5f64.log2(), 3.0, 5.0, 8.0] {
            let g = interval_geometry(m, 3.5).unwrap();
            assert!((2.0 * g.l_exclusive + g.l_overlap - g.l_total).abs() < 1e-12);
            assert!(g.l_overlap >= 0.0);
            assert!((g.l_overlap / g.l_total - overlap_from_m(m).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_spec_pairs_are_consistent() {
        let spec = OverlapSpec::from_overlap(1.0 / 3.0).unwrap();
        assert!((spec.m - 5f64.log2()).abs() < 1e-12);
        let spec = OverlapSpec::from_m(2.0).unwrap();
        assert!((spec.r_overlap - 0.2679).abs() < 1e-4);
    }
}
