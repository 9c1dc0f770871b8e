use super::MonteCarloError;
use crate::dmt_analytic::AntennaConfig;
use crate::dmt_solver::Cut;
use crate::rand_matrix::{log_det_shifted, ComplexMatrix};

/// One channel realisation. `g` is the `n x p` direct link. `h` is the
/// `n x m` relay-to-destination link for the destination cut, or the
/// `m x p` source-to-relay link for the source cut.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSample {
    pub g: ComplexMatrix,
    pub h: ComplexMatrix,
    pub snr: f64,
}

#[derive(Debug, Clone, Copy)]
struct Shapes {
    g: (usize, usize),
    h: (usize, usize),
}

fn shapes(cut: Cut, cfg: AntennaConfig) -> Shapes {
    let h = match cut {
        Cut::Destination => (cfg.n, cfg.m),
        Cut::Source => (cfg.m, cfg.p),
    };
    Shapes { g: (cfg.n, cfg.p), h }
}

impl ChannelSample {
    pub fn check(&self, cut: Cut, cfg: AntennaConfig) -> Result<(), MonteCarloError> {
        let want = shapes(cut, cfg);
        let check = |name, m: &ComplexMatrix, expected| {
            let found = (m.rows(), m.cols());
            if found != expected {
                return Err(MonteCarloError::Shape { name, expected, found });
            }
            Ok(())
        };
        check("G", &self.g, want.g)?;
        check("H", &self.h, want.h)?;
        if !(self.snr > 0.0 && self.snr.is_finite()) {
            return Err(MonteCarloError::Snr { p: self.snr });
        }
        Ok(())
    }
}

/// Cut-set mutual information in bits per channel use, for a relay that
/// listens a fraction `t` of the time.
///
/// Destination: `t log det(I + P GG*) + (1-t) log det(I + P [G H][G H]*)`.
/// Source: `t log det(I + P [G; H][G; H]*) + (1-t) log det(I + P GG*)`.
pub fn mutual_info_sample(cut: Cut, cfg: AntennaConfig, t: f64, sample: &ChannelSample) -> Result<f64, MonteCarloError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(MonteCarloError::ListeningFraction { t });
    }
    sample.check(cut, cfg)?;
    Ok(mutual_info_unchecked(cut, t, sample))
}

pub(crate) fn mutual_info_unchecked(cut: Cut, t: f64, s: &ChannelSample) -> f64 {
    let direct = log_det_shifted(&s.g, s.snr);
    let joint = match cut {
        Cut::Destination => log_det_shifted(&s.g.hstack(&s.h), s.snr),
        Cut::Source => log_det_shifted(&s.g.vstack(&s.h), s.snr),
    };
    match cut {
        Cut::Destination => t * direct + (1.0 - t) * joint,
        Cut::Source => t * joint + (1.0 - t) * direct,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: usize, m: usize, n: usize) -> AntennaConfig {
        AntennaConfig::new(p, m, n).unwrap()
    }

    #[test]
    fn zero_channel_carries_nothing() {
        let c = cfg(2, 3, 2);
        let d = ChannelSample {
            g: ComplexMatrix::zeros(2, 2),
            h: ComplexMatrix::zeros(2, 3),
            snr: 100.0,
        };
        assert_eq!(mutual_info_sample(Cut::Destination, c, 0.3, &d).unwrap(), 0.0);
        let s = ChannelSample {
            g: ComplexMatrix::zeros(2, 2),
            h: ComplexMatrix::zeros(3, 2),
            snr: 100.0,
        };
        assert_eq!(mutual_info_sample(Cut::Source, c, 0.3, &s).unwrap(), 0.0);
    }

    #[test]
    fn scalar_example() {
        let one = ComplexMatrix::from_real_rows(&[&[1.0]]).unwrap();
        let s = ChannelSample {
            g: one.clone(),
            h: one,
            snr: 3.0,
        };
        let v = mutual_info_sample(Cut::Destination, cfg(1, 1, 1), 0.5, &s).unwrap();
        assert!((v - (1.0 + 0.5 * 7f64.log2())).abs() < 1e-14);
    }

    #[test]
    fn endpoint_is_direct_link() {
        let g = ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[-0.2, 2.0]]).unwrap();
        let h = ComplexMatrix::from_real_rows(&[&[0.3], &[0.7]]).unwrap();
        let s = ChannelSample {
            g: g.clone(),
            h,
            snr: 10.0,
        };
        let v = mutual_info_sample(Cut::Destination, cfg(2, 1, 2), 1.0, &s).unwrap();
        assert_eq!(v, log_det_shifted(&g, 10.0));
    }

    #[test]
    fn rejects_bad_input() {
        let one = ComplexMatrix::from_real_rows(&[&[1.0]]).unwrap();
        let s = ChannelSample {
            g: one.clone(),
            h: one,
            snr: 3.0,
        };
        assert!(matches!(
            mutual_info_sample(Cut::Destination, cfg(1, 2, 1), 0.5, &s),
            Err(MonteCarloError::Shape { name: "H", .. })
        ));
        assert!(matches!(
            mutual_info_sample(Cut::Destination, cfg(1, 1, 1), 1.5, &s),
            Err(MonteCarloError::ListeningFraction { .. })
        ));
    }
}
