use crate::error::{Error, Result};
use crate::many_to_one::{self, GatheringScenario};
use crate::radio::RadioParams;
use crate::spacing::SpacingVector;

/// Floor on a hop, as a fraction of the link length, applied after each
/// step.
const HOP_FLOOR: f64 = 1e-12;

/// Steps below this are treated as a stalled line search.
const MIN_STEP: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// Start at `initial`, multiply by `shrink` until the Armijo condition
    /// with constant `armijo` holds.
    Backtracking {
        initial: f64,
        shrink: f64,
        armijo: f64,
    },
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule::Backtracking {
            initial: 1.0,
            shrink: 0.5,
            armijo: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizerSettings {
    /// Stop once the marginal costs `dE/dh_i` agree to this relative spread.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub step_rule: StepRule,
}

impl Default for MinimizerSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 100_000,
            step_rule: StepRule::default(),
        }
    }
}

impl MinimizerSettings {
    fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::invalid("minimizer tolerance must be > 0"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("minimizer max_iterations must be >= 1"));
        }
        let StepRule::Backtracking {
            initial,
            shrink,
            armijo,
        } = self.step_rule;
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if initial.is_nan() || initial <= 0.0 || !open_unit(shrink) || !open_unit(armijo) {
            return Err(Error::invalid(format!(
                "invalid backtracking rule {:?}",
                self.step_rule
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericOptimum {
    pub spacing: SpacingVector,
    pub energy: f64,
    pub iterations: usize,
    /// Relative spread of the marginal costs at the returned point.
    pub residual: f64,
}

/// Cycle energy as a function of the hop fractions `x = h / D`.
///
/// Only the amplifier terms `A_t(i) * e_d * h_i^n` move with the spacing,
/// so energy differences between two spacings are taken from those terms
/// directly. Subtracting two evaluations of the full total would lose the
/// tiny decreases near the optimum to cancellation against the fixed
/// electronics and idle energy.
struct CycleObjective {
    weights: Vec<f64>,
    distance: f64,
    e_d: f64,
    n: f64,
    scale: f64,
}

impl CycleObjective {
    fn new(params: &RadioParams, scenario: &GatheringScenario) -> Result<Self> {
        let nodes = scenario.nodes();
        let weights = (1..=nodes)
            .map(|i| many_to_one::packets_transmitted(nodes, i).map(|c| c as f64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            weights,
            distance: scenario.distance(),
            e_d: params.e_d(),
            n: params.path_loss_exponent(),
            scale: 1.0,
        })
    }

    /// dE/dx_i.
    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for ((g, w), xi) in out.iter_mut().zip(&self.weights).zip(x) {
            let h = self.distance * xi;
            *g = self.scale * self.distance * w * self.n * self.e_d * h.powf(self.n - 1.0);
        }
    }

    /// E(to) - E(from) - multiplier * (sum(to) - sum(from)).
    ///
    /// On the simplex this is the energy change. Renormalized iterates only
    /// sum to one up to rounding, and the multiplier term removes the
    /// first-order effect of that drift.
    fn change(&self, from: &[f64], to: &[f64], multiplier: f64) -> f64 {
        let sum: f64 = from
            .iter()
            .zip(to)
            .zip(&self.weights)
            .map(|((a, b), w)| {
                let h = self.distance * a;
                // h'^n - h^n without cancellation
                let growth = (self.n * ((b - a) / a).ln_1p()).exp_m1();
                w * self.e_d * h.powf(self.n) * growth
            })
            .sum();
        let drift: f64 = from.iter().zip(to).map(|(a, b)| b - a).sum();
        self.scale * sum - multiplier * drift
    }
}

fn project(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = v.max(HOP_FLOOR);
    }
    let sum: f64 = x.iter().sum();
    for v in x.iter_mut() {
        *v /= sum;
    }
}

fn spread(values: &[f64]) -> f64 {
    many_to_one::relative_spread(values)
}

/// Minimizes the cycle energy over spacings spanning the scenario's link by
/// projected gradient descent on the simplex, starting from equal hops.
///
/// The descent direction is the gradient with its mean removed, so steps
/// stay on `sum(h) = D`; iterates are then clamped to a small positive floor
/// and renormalized. Convergence is declared when the marginal costs agree
/// to `settings.tolerance`, which is exactly the first-order condition of the
/// constrained problem.
pub fn minimize_spacing_numeric(
    params: &RadioParams,
    scenario: &GatheringScenario,
    settings: &MinimizerSettings,
) -> Result<NumericOptimum> {
    settings.validate()?;
    let nodes = scenario.nodes();
    let distance = scenario.distance();
    let finish = |x: &[f64], iterations: usize, residual: f64| -> Result<NumericOptimum> {
        let spacing = SpacingVector::from_weights(x, distance)?;
        let energy = many_to_one::total_energy(params, scenario, &spacing)?;
        Ok(NumericOptimum {
            spacing,
            energy,
            iterations,
            residual,
        })
    };
    if nodes == 1 {
        return finish(&[1.0], 0, 0.0);
    }

    let StepRule::Backtracking {
        initial,
        shrink,
        armijo,
    } = settings.step_rule;

    let mut objective = CycleObjective::new(params, scenario)?;
    let mut x = vec![1.0 / nodes as f64; nodes];
    let mut grad = vec![0.0; nodes];
    objective.gradient(&x, &mut grad);
    // unit-sized initial gradient so the unit trial step is meaningful
    objective.scale = 1.0 / grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));

    let mut trial = vec![0.0; nodes];
    let mut best = (x.clone(), f64::INFINITY);

    for iteration in 0..settings.max_iterations {
        objective.gradient(&x, &mut grad);
        let residual = spread(&grad);
        if residual < best.1 {
            best = (x.clone(), residual);
        }
        if residual <= settings.tolerance {
            return finish(&x, iteration, residual);
        }

        let mean = grad.iter().sum::<f64>() / nodes as f64;
        let direction: Vec<f64> = grad.iter().map(|g| g - mean).collect();
        let slope: f64 = direction.iter().map(|d| d * d).sum();

        let mut step = initial;
        loop {
            for ((t, xi), d) in trial.iter_mut().zip(&x).zip(&direction) {
                *t = xi - step * d;
            }
            project(&mut trial);
            if objective.change(&x, &trial, mean) <= -armijo * step * slope {
                break;
            }
            step *= shrink;
            if step < MIN_STEP {
                return Err(Error::NoConvergence {
                    iterations: iteration,
                    residual: best.1,
                    best: best.0.iter().map(|v| v * distance).collect(),
                });
            }
        }
        std::mem::swap(&mut x, &mut trial);
    }

    objective.gradient(&x, &mut grad);
    let residual = spread(&grad);
    if residual <= settings.tolerance {
        return finish(&x, settings.max_iterations, residual);
    }
    if residual < best.1 {
        best = (x, residual);
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iterations,
        residual: best.1,
        best: best.0.iter().map(|v| v * distance).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn single_node_is_immediate() {
        let p = RadioParams::reference();
        let s = GatheringScenario::new(1, 100.0, 60.0, 1.0).unwrap();
        let opt = minimize_spacing_numeric(&p, &s, &MinimizerSettings::default()).unwrap();
        assert_eq!(opt.spacing.hops(), &[100.0]);
        assert_eq!(opt.iterations, 0);
    }

    #[test]
    fn reproduces_quadratic_three_node_optimum() {
        let p = RadioParams::reference();
        let s = GatheringScenario::new(3, 100.0, 60.0, 1.0).unwrap();
        let opt = minimize_spacing_numeric(&p, &s, &MinimizerSettings::default()).unwrap();
        for (h, e) in opt
            .spacing
            .hops()
            .iter()
            .zip([200.0 / 11.0, 300.0 / 11.0, 600.0 / 11.0])
        {
            assert!(rel(*h, e) < 1e-6, "{h} vs {e}");
        }
        assert!(opt.residual <= 1e-10);
    }

    #[test]
    fn reproduces_cubic_two_node_optimum() {
        let p = RadioParams::reference().with_exponent(3.0).unwrap();
        let s = GatheringScenario::new(2, 100.0, 60.0, 1.0).unwrap();
        let opt = minimize_spacing_numeric(&p, &s, &MinimizerSettings::default()).unwrap();
        let w = 0.5f64.sqrt();
        for (h, e) in opt
            .spacing
            .hops()
            .iter()
            .zip([100.0 * w / (1.0 + w), 100.0 / (1.0 + w)])
        {
            assert!(rel(*h, e) < 1e-6, "{h} vs {e}");
        }
    }

    #[test]
    fn reports_non_convergence_with_best_iterate() {
        let p = RadioParams::reference();
        let s = GatheringScenario::new(8, 100.0, 60.0, 1.0).unwrap();
        let settings = MinimizerSettings {
            max_iterations: 2,
            ..Default::default()
        };
        match minimize_spacing_numeric(&p, &s, &settings) {
            Err(Error::NoConvergence { best, residual, .. }) => {
                assert_eq!(best.len(), 8);
                assert!(residual > settings.tolerance);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_settings() {
        let p = RadioParams::reference();
        let s = GatheringScenario::new(3, 100.0, 60.0, 1.0).unwrap();
        for settings in [
            MinimizerSettings {
                tolerance: 0.0,
                ..Default::default()
            },
            MinimizerSettings {
                max_iterations: 0,
                ..Default::default()
            },
            MinimizerSettings {
                step_rule: StepRule::Backtracking {
                    initial: 1.0,
                    shrink: 1.0,
                    armijo: 1e-4,
                },
                ..Default::default()
            },
        ] {
            assert!(minimize_spacing_numeric(&p, &s, &settings).is_err());
        }
    }

    #[test]
    fn change_matches_direct_difference_away_from_optimum() {
        let p = RadioParams::reference().with_exponent(2.5).unwrap();
        let s = GatheringScenario::new(4, 100.0, 60.0, 1.0).unwrap();
        let obj = CycleObjective::new(&p, &s).unwrap();
        let a = [0.1, 0.2, 0.3, 0.4];
        let b = [0.4, 0.3, 0.2, 0.1];
        let direct =
            many_to_one::total_energy(&p, &s, &SpacingVector::from_weights(&b, 100.0).unwrap())
                .unwrap()
                - many_to_one::total_energy(
                    &p,
                    &s,
                    &SpacingVector::from_weights(&a, 100.0).unwrap(),
                )
                .unwrap();
        assert!(rel(obj.change(&a, &b, 0.0), direct) < 1e-9);
    }
}
