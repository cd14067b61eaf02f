use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::any_to_any::{self, AnyToAnyScenario, RelayCase};
use crate::error::{Error, Result};
use crate::many_to_one::{self, GatheringScenario};
use crate::radio::RadioParams;
use crate::spacing::SpacingVector;

/// Relative undercut below which a random spacing counts as beating the
/// reference.
pub const UNDERCUT_TOLERANCE: f64 = 1e-9;

/// Which energy function a probe evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeTarget {
    /// Single-source relay chain with a fixed number of hops.
    Relay {
        scenario: AnyToAnyScenario,
        hops: usize,
        case: RelayCase,
    },
    /// Data-gathering chain; the hop count is the scenario's node count.
    Gathering(GatheringScenario),
}

impl ProbeTarget {
    fn hops(&self) -> usize {
        match self {
            ProbeTarget::Relay { hops, .. } => *hops,
            ProbeTarget::Gathering(s) => s.nodes(),
        }
    }

    fn distance(&self) -> f64 {
        match self {
            ProbeTarget::Relay { scenario, .. } => scenario.distance(),
            ProbeTarget::Gathering(s) => s.distance(),
        }
    }

    /// Energy of `spacing` under this target's model.
    pub fn energy(&self, params: &RadioParams, spacing: &SpacingVector) -> Result<f64> {
        match self {
            ProbeTarget::Relay {
                scenario,
                case: RelayCase::NoIdle,
                ..
            } => any_to_any::energy_case1_general(params, spacing, scenario.packets()),
            ProbeTarget::Relay {
                scenario,
                case: RelayCase::WithIdle,
                ..
            } => any_to_any::energy_case2_general(params, scenario, spacing),
            ProbeTarget::Gathering(s) => many_to_one::total_energy(params, s, spacing),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeReport {
    pub trials: usize,
    /// Trials whose energy fell below the reference by more than
    /// [`UNDERCUT_TOLERANCE`] relative.
    pub violations: usize,
    pub min_energy: f64,
}

/// Spacing drawn uniformly from the simplex `{h > 0, sum(h) = total}`.
pub fn random_spacing<R: Rng + ?Sized>(
    rng: &mut R,
    hops: usize,
    total: f64,
) -> Result<SpacingVector> {
    let draws: Vec<f64> = (0..hops)
        .map(|_| {
            let v: f64 = rng.sample(Exp1);
            v.max(f64::MIN_POSITIVE)
        })
        .collect();
    SpacingVector::from_weights(&draws, total)
}

/// RNG for one trial. Streams are keyed by trial index so results do not
/// depend on evaluation order.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Evaluates `trials` random spacings and counts how many beat
/// `reference_energy`.
pub fn random_spacing_probe(
    params: &RadioParams,
    target: &ProbeTarget,
    reference_energy: f64,
    trials: usize,
    seed: u64,
) -> Result<ProbeReport> {
    if trials == 0 {
        return Err(Error::invalid("probe needs at least one trial"));
    }
    let threshold = reference_energy - UNDERCUT_TOLERANCE * reference_energy.abs();
    let mut violations = 0;
    let mut min_energy = f64::INFINITY;
    for trial in 0..trials {
        let spacing = random_spacing(
            &mut trial_rng(seed, trial),
            target.hops(),
            target.distance(),
        )?;
        let energy = target.energy(params, &spacing)?;
        if energy < threshold {
            violations += 1;
        }
        min_energy = min_energy.min(energy);
    }
    Ok(ProbeReport {
        trials,
        violations,
        min_energy,
    })
}
