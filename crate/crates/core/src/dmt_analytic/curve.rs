use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::CurveError;

/// Corners closer than this in `r` are treated as one point.
pub const CORNER_MERGE_TOL: f64 = 1e-12;

/// A DMT curve, stored as its ordered corner points `(r, d)` and linearly
/// interpolated in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinearCurve {
    corners: Vec<(f64, f64)>,
}

impl PiecewiseLinearCurve {
    /// Validates ordering, monotonicity and the zero end point. Convexity is
    /// checked separately by [`Self::check_convex`], since pointwise minima
    /// of convex curves need not be convex.
    pub fn new(corners: Vec<(f64, f64)>) -> Result<Self, CurveError> {
        let curve = Self { corners };
        curve.check_invariants()?;
        Ok(curve)
    }

    pub(crate) fn from_corners_unchecked(corners: Vec<(f64, f64)>) -> Self {
        Self { corners }
    }

    pub fn corners(&self) -> &[(f64, f64)] {
        &self.corners
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.corners[0].0, self.corners[self.corners.len() - 1].0)
    }

    pub fn check_invariants(&self) -> Result<(), CurveError> {
        if self.corners.is_empty() {
            return Err(CurveError::Empty);
        }
        for (index, &(r, d)) in self.corners.iter().enumerate() {
            if !r.is_finite() || !d.is_finite() || r < 0.0 || d < 0.0 {
                return Err(CurveError::InvalidCorner { index });
            }
        }
        for (index, w) in self.corners.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(CurveError::NotIncreasing { index: index + 1 });
            }
            if w[1].1 > w[0].1 {
                return Err(CurveError::Increasing { index: index + 1 });
            }
        }
        let d_end = self.corners[self.corners.len() - 1].1;
        if d_end != 0.0 {
            return Err(CurveError::NonZeroEnd { d: d_end });
        }
        Ok(())
    }

    /// Slopes must be non-decreasing up to `tol`.
    pub fn check_convex(&self, tol: f64) -> Result<(), CurveError> {
        let slopes = self.slopes();
        for (i, w) in slopes.windows(2).enumerate() {
            if w[1] < w[0] - tol {
                return Err(CurveError::NotConvex { index: i + 1 });
            }
        }
        Ok(())
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.corners
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }

    /// Linear interpolation between the bracketing corners; exact at corners.
    pub fn eval(&self, r: f64) -> Result<f64, CurveError> {
        let (lo, hi) = self.domain();
        if !(r >= lo - CORNER_MERGE_TOL && r <= hi + CORNER_MERGE_TOL) {
            return Err(CurveError::OutOfDomain { r, lo, hi });
        }
        let r = r.clamp(lo, hi);
        let idx = self.corners.partition_point(|&(x, _)| x < r);
        if idx < self.corners.len() && self.corners[idx].0 == r {
            return Ok(self.corners[idx].1);
        }
        let (r0, d0) = self.corners[idx - 1];
        let (r1, d1) = self.corners[idx];
        Ok(d0 + (d1 - d0) * (r - r0) / (r1 - r0))
    }

    /// Drops interior corners whose deviation from the chord through their
    /// neighbours is at most `tol`.
    pub fn collapse_collinear(&self, tol: f64) -> Self {
        let mut kept: Vec<(f64, f64)> = Vec::with_capacity(self.corners.len());
        for &pt in &self.corners {
            while kept.len() >= 2 {
                let (r0, d0) = kept[kept.len() - 2];
                let (r1, d1) = kept[kept.len() - 1];
                let chord = d0 + (pt.1 - d0) * (r1 - r0) / (pt.0 - r0);
                if (chord - d1).abs() <= tol {
                    kept.pop();
                } else {
                    break;
                }
            }
            kept.push(pt);
        }
        Self { corners: kept }
    }
}

/// Pointwise minimum on the common domain.
///
/// Evaluation and crossing points are computed in exact rational arithmetic
/// on the (exactly representable) double corner coordinates and rounded once
/// at the end. The result keeps the union of both corner sets plus every
/// crossing.
pub fn curve_min(
    a: &PiecewiseLinearCurve,
    b: &PiecewiseLinearCurve,
) -> Result<PiecewiseLinearCurve, CurveError> {
    let ra = to_rational(&a.corners);
    let rb = to_rational(&b.corners);
    let lo = ra[0].0.clone().max(rb[0].0.clone());
    let hi = ra[ra.len() - 1].0.clone().min(rb[rb.len() - 1].0.clone());
    if lo > hi {
        return Err(CurveError::DisjointDomains);
    }

    let mut xs: Vec<BigRational> = ra
        .iter()
        .chain(rb.iter())
        .map(|(x, _)| x.clone())
        .filter(|x| *x >= lo && *x <= hi)
        .chain([lo.clone(), hi.clone()])
        .collect();
    xs.sort();
    xs.dedup();

    let mut points: Vec<(BigRational, BigRational)> = Vec::with_capacity(2 * xs.len());
    for (i, x) in xs.iter().enumerate() {
        let fa = eval_rational(&ra, x);
        let fb = eval_rational(&rb, x);
        if i > 0 {
            let x0 = &xs[i - 1];
            let diff0 = eval_rational(&ra, x0) - eval_rational(&rb, x0);
            let diff1 = &fa - &fb;
            if (diff0.is_positive() && diff1.is_negative()) || (diff0.is_negative() && diff1.is_positive()) {
                let cross = x0 + (x - x0) * &diff0 / (&diff0 - &diff1);
                let fc = eval_rational(&ra, &cross);
                points.push((cross, fc));
            }
        }
        points.push((x.clone(), fa.min(fb)));
    }

    let mut corners: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for (x, y) in points {
        let pt = (rat_to_f64(&x), rat_to_f64(&y));
        match corners.last_mut() {
            Some(last) if (pt.0 - last.0).abs() < CORNER_MERGE_TOL => last.1 = last.1.min(pt.1),
            _ => corners.push(pt),
        }
    }
    Ok(PiecewiseLinearCurve::from_corners_unchecked(corners))
}

fn to_rational(corners: &[(f64, f64)]) -> Vec<(BigRational, BigRational)> {
    corners
        .iter()
        .map(|&(r, d)| {
            (
                BigRational::from_float(r).expect("finite corner"),
                BigRational::from_float(d).expect("finite corner"),
            )
        })
        .collect()
}

fn eval_rational(corners: &[(BigRational, BigRational)], x: &BigRational) -> BigRational {
    let idx = corners.partition_point(|(cx, _)| cx < x);
    if idx < corners.len() && corners[idx].0 == *x {
        return corners[idx].1.clone();
    }
    let (x0, y0) = &corners[idx - 1];
    let (x1, y1) = &corners[idx];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational built from finite doubles")
}
