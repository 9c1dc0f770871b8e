use serde::{Deserialize, Serialize};

use super::{curve_min, AntennaConfig, CurveError, PiecewiseLinearCurve, CORNER_MERGE_TOL};

/// Point-to-point `p x n` MIMO curve through `(k, (p-k)(n-k))`, `k = 0..=p∧n`.
pub fn ptp_dmt(p: usize, n: usize) -> Result<PiecewiseLinearCurve, CurveError> {
    if p == 0 || n == 0 {
        return Err(CurveError::InvalidAntennas { p, m: 1, n });
    }
    let corners = (0..=p.min(n))
        .map(|k| (k as f64, ((p - k) * (n - k)) as f64))
        .collect();
    PiecewiseLinearCurve::new(corners)
}

/// Full-duplex relay benchmark: `min(d_{p+m,n}, d_{p,n+m})`.
pub fn full_duplex_dmt(cfg: AntennaConfig) -> Result<PiecewiseLinearCurve, CurveError> {
    let AntennaConfig { p, m, n } = cfg;
    curve_min(&ptp_dmt(p + m, n)?, &ptp_dmt(p, n + m)?)
}

/// `min(n, floor((m+1)/3))`, which separates the three regimes of the
/// symmetric curve.
pub fn symmetric_l0(n: usize, m: usize) -> usize {
    n.min((m + 1) / 3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Low multiplexing, `r = l/2` for `l = 0..=l0`.
    A,
    /// Intermediate, `r = l0/2 + l` for `l = 0..=n-l0`.
    B,
    /// High multiplexing, `r = n - l/2` for `l = 0..=l0`.
    C,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::A, Regime::B, Regime::C];

    /// Largest admissible index `l`.
    pub fn max_index(self, n: usize, m: usize) -> usize {
        let l0 = symmetric_l0(n, m);
        match self {
            Regime::A | Regime::C => l0,
            Regime::B => n - l0,
        }
    }

    /// Multiplexing gain `r` of corner `l` (the index is not range-checked).
    pub fn multiplexing(self, n: usize, m: usize, l: usize) -> f64 {
        let l0 = symmetric_l0(n, m);
        match self {
            Regime::A => l as f64 / 2.0,
            Regime::B => l0 as f64 / 2.0 + l as f64,
            Regime::C => n as f64 - l as f64 / 2.0,
        }
    }

    /// Diversity gain of corner `l`.
    pub fn diversity(self, n: usize, m: usize, l: usize) -> f64 {
        let l0 = symmetric_l0(n, m) as i64;
        let (n, m, l) = (n as i64, m as i64, l as i64);
        let d = match self {
            Regime::A => n * n + (m - l) * (n - l),
            Regime::B => l0 * l0 + (n + m - l) * (n - l0 - l),
            Regime::C => l * l,
        };
        d as f64
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::A => "a",
            Regime::B => "b",
            Regime::C => "c",
        };
        f.write_str(s)
    }
}

/// One corner of the symmetric curve, tagged with the regime that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeCorner {
    pub regime: Regime,
    pub l: usize,
    pub r: f64,
    pub d: f64,
}

/// Every regime corner, including the duplicates at regime boundaries.
pub fn symmetric_corners(n: usize, m: usize) -> Vec<RegimeCorner> {
    Regime::ALL
        .iter()
        .flat_map(|&regime| {
            (0..=regime.max_index(n, m)).map(move |l| RegimeCorner {
                regime,
                l,
                r: regime.multiplexing(n, m, l),
                d: regime.diversity(n, m, l),
            })
        })
        .collect()
}

/// Closed-form half-duplex DMT for `p = n` source/destination antennas and
/// `m` relay antennas.
///
/// Regime c is indexed over `l = 0..=l0`, so that it meets regime b at
/// `r = n - l0/2`.
pub fn symmetric_half_duplex_dmt(n: usize, m: usize) -> Result<PiecewiseLinearCurve, CurveError> {
    AntennaConfig::symmetric(n, m)?;
    let mut pts: Vec<(f64, f64)> = symmetric_corners(n, m).iter().map(|c| (c.r, c.d)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut corners: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for pt in pts {
        match corners.last_mut() {
            Some(last) if (pt.0 - last.0).abs() < CORNER_MERGE_TOL => last.1 = last.1.min(pt.1),
            _ => corners.push(pt),
        }
    }
    let curve = PiecewiseLinearCurve::new(corners)?;
    debug_assert!(curve.check_convex(0.0).is_ok());
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corners(c: &PiecewiseLinearCurve) -> Vec<(f64, f64)> {
        c.corners().to_vec()
    }

    #[test]
    fn ptp_examples() {
        assert_eq!(corners(&ptp_dmt(2, 2).unwrap()), vec![(0.0, 4.0), (1.0, 1.0), (2.0, 0.0)]);
        assert_eq!(corners(&ptp_dmt(1, 1).unwrap()), vec![(0.0, 1.0), (1.0, 0.0)]);
        assert_eq!(corners(&ptp_dmt(3, 1).unwrap()), vec![(0.0, 3.0), (1.0, 0.0)]);
        assert!(ptp_dmt(0, 2).is_err());
    }

    #[test]
    fn ptp_symmetric_in_arguments() {
        for p in 1..=6 {
            for n in 1..=6 {
                assert_eq!(ptp_dmt(p, n).unwrap(), ptp_dmt(n, p).unwrap());
            }
        }
    }

    #[test]
    fn ptp_eval_examples() {
        assert_eq!(ptp_dmt(2, 2).unwrap().eval(0.5).unwrap(), 2.5);
        assert_eq!(ptp_dmt(3, 3).unwrap().eval(2.5).unwrap(), 0.5);
    }

    #[test]
    fn full_duplex_examples() {
        let fd = |p, m, n| corners(&full_duplex_dmt(AntennaConfig::new(p, m, n).unwrap()).unwrap());
        assert_eq!(fd(3, 1, 3), vec![(0.0, 12.0), (1.0, 6.0), (2.0, 2.0), (3.0, 0.0)]);
        assert_eq!(fd(1, 1, 1), vec![(0.0, 2.0), (1.0, 0.0)]);
        assert_eq!(fd(3, 3, 3), vec![(0.0, 18.0), (1.0, 10.0), (2.0, 4.0), (3.0, 0.0)]);
    }

    #[test]
    fn full_duplex_asymmetric_ends_at_zero() {
        for p in 1..=4 {
            for m in 1..=4 {
                for n in 1..=4 {
                    let c = full_duplex_dmt(AntennaConfig::new(p, m, n).unwrap()).unwrap();
                    c.check_invariants().unwrap();
                    assert_eq!(c.domain(), (0.0, p.min(n) as f64));
                }
            }
        }
    }

    #[test]
    fn l0_values() {
        assert_eq!(symmetric_l0(3, 1), 0);
        assert_eq!(symmetric_l0(3, 3), 1);
        assert_eq!(symmetric_l0(3, 7), 2);
        assert_eq!(symmetric_l0(3, 8), 3);
        assert_eq!(symmetric_l0(1, 100), 1);
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(
            corners(&symmetric_half_duplex_dmt(3, 3).unwrap()),
            vec![(0.0, 18.0), (0.5, 13.0), (1.5, 6.0), (2.5, 1.0), (3.0, 0.0)]
        );
        assert_eq!(
            corners(&symmetric_half_duplex_dmt(3, 1).unwrap()),
            vec![(0.0, 12.0), (1.0, 6.0), (2.0, 2.0), (3.0, 0.0)]
        );
        assert_eq!(
            corners(&symmetric_half_duplex_dmt(3, 7).unwrap()),
            vec![(0.0, 30.0), (0.5, 21.0), (1.0, 14.0), (2.0, 4.0), (2.5, 1.0), (3.0, 0.0)]
        );
    }

    #[test]
    fn regime_boundaries_coincide() {
        for n in 1..=6 {
            for m in 1..=20 {
                let l0 = symmetric_l0(n, m);
                assert_eq!(Regime::A.diversity(n, m, l0), Regime::B.diversity(n, m, 0));
                assert_eq!(Regime::A.multiplexing(n, m, l0), Regime::B.multiplexing(n, m, 0));
                assert_eq!(Regime::B.diversity(n, m, n - l0), Regime::C.diversity(n, m, l0));
                assert_eq!(Regime::B.multiplexing(n, m, n - l0), Regime::C.multiplexing(n, m, l0));
            }
        }
    }

    #[test]
    fn symmetric_curves_are_convex_with_expected_ends() {
        for n in 1..=6 {
            for m in 1..=20 {
                let c = symmetric_half_duplex_dmt(n, m).unwrap();
                c.check_invariants().unwrap();
                c.check_convex(0.0).unwrap();
                assert_eq!(c.eval(0.0).unwrap(), (n * n + m * n) as f64);
                assert_eq!(c.eval(n as f64).unwrap(), 0.0);
            }
        }
    }
}
