//! Per-packet radio energy dissipation model.
//!
//! Transmitting one packet over a hop of length `h` costs `e_t + e_d * h^n`,
//! receiving one costs `e_r`, and an idle radio burns `e_id` per packet
//! duration. All energies are SI joules.

use crate::error::{Error, Result};

/// Smallest admissible path loss exponent. Characteristic distances divide
/// by `n - 1`.
pub const MIN_PATH_LOSS_EXPONENT: f64 = 1.0 + 1e-9;

/// How the idle-state energy is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IdleEnergy {
    /// Joules per packet duration.
    PerPacket(f64),
    /// Fraction `c` of the receive energy, `0 < c <= 1`.
    Fraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    e_t: f64,
    e_r: f64,
    e_d: f64,
    e_id: f64,
    n: f64,
}

impl RadioParams {
    pub fn new(e_t: f64, e_r: f64, e_d: f64, idle: IdleEnergy, n: f64) -> Result<Self> {
        positive("e_t", e_t)?;
        positive("e_r", e_r)?;
        positive("e_d", e_d)?;
        if !n.is_finite() || n < MIN_PATH_LOSS_EXPONENT {
            return Err(Error::invalid(format!(
                "path loss exponent n must be > 1, got {n}"
            )));
        }
        let e_id = match idle {
            IdleEnergy::PerPacket(e_id) => {
                positive("e_id", e_id)?;
                if e_id > e_r {
                    return Err(Error::invalid(format!(
                        "e_id = {e_id} exceeds e_r = {e_r} (idle fraction must be <= 1)"
                    )));
                }
                e_id
            }
            IdleEnergy::Fraction(c) => {
                if c.is_nan() || c <= 0.0 || c > 1.0 {
                    return Err(Error::invalid(format!(
                        "idle fraction c must lie in (0, 1], got {c}"
                    )));
                }
                c * e_r
            }
        };
        Ok(Self {
            e_t,
            e_r,
            e_d,
            e_id,
            n,
        })
    }

    /// Reference parameter set: 25.6 uJ electronics, 51.2 nJ/m^2 amplifier,
    /// 23.04 uJ idle, free-space exponent.
    pub fn reference() -> Self {
        Self::new(
            25.6e-6,
            25.6e-6,
            51.2e-9,
            IdleEnergy::PerPacket(23.04e-6),
            2.0,
        )
        .expect("reference parameters are valid")
    }

    /// Copy with a different path loss exponent.
    pub fn with_exponent(&self, n: f64) -> Result<Self> {
        Self::new(
            self.e_t,
            self.e_r,
            self.e_d,
            IdleEnergy::PerPacket(self.e_id),
            n,
        )
    }

    pub fn e_t(&self) -> f64 {
        self.e_t
    }

    pub fn e_r(&self) -> f64 {
        self.e_r
    }

    pub fn e_d(&self) -> f64 {
        self.e_d
    }

    pub fn e_id(&self) -> f64 {
        self.e_id
    }

    /// Idle fraction `c = e_id / e_r`.
    pub fn idle_fraction(&self) -> f64 {
        self.e_id / self.e_r
    }

    pub fn path_loss_exponent(&self) -> f64 {
        self.n
    }

    /// Energy to transmit one packet over `h` meters.
    pub fn tx_energy(&self, h: f64) -> Result<f64> {
        if !h.is_finite() || h < 0.0 {
            return Err(Error::invalid(format!(
                "hop distance must be finite and >= 0, got {h}"
            )));
        }
        Ok(self.e_t + self.e_d * h.powf(self.n))
    }

    /// Energy to receive one packet.
    pub fn rx_energy(&self) -> f64 {
        self.e_r
    }

    /// Energy burned idling for `t_idle` seconds at `p_rate` packets/s.
    pub fn idle_energy(&self, t_idle: f64, p_rate: f64) -> Result<f64> {
        if !t_idle.is_finite() || t_idle < 0.0 {
            return Err(Error::invalid(format!(
                "idle time must be finite and >= 0, got {t_idle}"
            )));
        }
        positive("packet rate P", p_rate)?;
        Ok(self.e_id * t_idle * p_rate)
    }
}

pub(crate) fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn tx_energy_examples() {
        let p = RadioParams::reference();
        assert_eq!(p.tx_energy(0.0).unwrap(), 25.6e-6);
        assert!(close(p.tx_energy(1000f64.sqrt()).unwrap(), 76.8e-6, 1e-12));
        assert!(close(p.tx_energy(31.6228).unwrap(), 76.8e-6, 1e-6));
        assert!(close(p.tx_energy(100.0).unwrap(), 537.6e-6, 1e-12));
    }

    #[test]
    fn tx_energy_rejects_negative_distance() {
        let p = RadioParams::reference();
        assert!(matches!(p.tx_energy(-1.0), Err(Error::InvalidInput(_))));
        assert!(p.tx_energy(f64::NAN).is_err());
    }

    #[test]
    fn rx_energy_is_identity() {
        assert_eq!(RadioParams::reference().rx_energy(), 25.6e-6);
        let p = RadioParams::new(1.0, 1.0, 1.0, IdleEnergy::Fraction(0.5), 2.0).unwrap();
        assert_eq!(p.rx_energy(), 1.0);
        let p = RadioParams::new(1.0, 51.2e-6, 1.0, IdleEnergy::Fraction(0.5), 2.0).unwrap();
        assert_eq!(p.rx_energy(), 51.2e-6);
    }

    #[test]
    fn idle_energy_examples() {
        let p = RadioParams::reference();
        assert_eq!(p.idle_energy(0.0, 1.0).unwrap(), 0.0);
        assert!(close(p.idle_energy(10.0, 1.0).unwrap(), 230.4e-6, 1e-12));
        assert!(close(p.idle_energy(60.0, 1.0).unwrap(), 1.3824e-3, 1e-12));
        assert!(p.idle_energy(-1.0, 1.0).is_err());
        assert!(p.idle_energy(1.0, 0.0).is_err());
    }

    #[test]
    fn fraction_derives_idle_energy() {
        let p =
            RadioParams::new(25.6e-6, 25.6e-6, 51.2e-9, IdleEnergy::Fraction(0.9), 2.0).unwrap();
        assert!(close(p.e_id(), 23.04e-6, 1e-12));
        assert!(close(RadioParams::reference().idle_fraction(), 0.9, 1e-12));
    }

    #[test]
    fn rejects_invalid_parameters() {
        let bad = [
            RadioParams::new(0.0, 1.0, 1.0, IdleEnergy::Fraction(0.5), 2.0),
            RadioParams::new(1.0, -1.0, 1.0, IdleEnergy::Fraction(0.5), 2.0),
            RadioParams::new(1.0, 1.0, 0.0, IdleEnergy::Fraction(0.5), 2.0),
            RadioParams::new(1.0, 1.0, 1.0, IdleEnergy::Fraction(0.0), 2.0),
            RadioParams::new(1.0, 1.0, 1.0, IdleEnergy::Fraction(1.5), 2.0),
            RadioParams::new(1.0, 1.0, 1.0, IdleEnergy::PerPacket(2.0), 2.0),
            RadioParams::new(1.0, 1.0, 1.0, IdleEnergy::Fraction(0.5), 1.0),
            RadioParams::new(1.0, 1.0, 1.0, IdleEnergy::Fraction(0.5), f64::NAN),
        ];
        for r in bad {
            assert!(r.is_err(), "{r:?}");
        }
        assert!(RadioParams::new(1.0, 1.0, 1.0, IdleEnergy::Fraction(1.0), 1.5).is_ok());
    }

    #[test]
    fn tx_energy_is_increasing_and_convex() {
        for n in [1.5, 2.0, 3.0, 4.0] {
            let p = RadioParams::reference().with_exponent(n).unwrap();
            let step = 0.25;
            let e: Vec<f64> = (1..400)
                .map(|k| p.tx_energy(k as f64 * step).unwrap())
                .collect();
            for w in e.windows(3) {
                assert!(w[1] > w[0]);
                let second = w[2] - 2.0 * w[1] + w[0];
                assert!(second >= -1e-18 * w[1], "n={n}: {second}");
            }
        }
    }
}
