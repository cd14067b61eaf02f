//! Single-source relay chains: the farthest node sends `A` packets to the
//! sink through every intermediate node using nearest-neighbour routing.
//!
//! Two energy models are covered. The baseline charges transmit and receive
//! electronics plus the distance-dependent amplifier term; the idle variant
//! additionally charges every node `e_id` for each packet slot of the cycle
//! `T_d` in which it neither sends nor receives. Reception at the sink is
//! never charged.
//!
//! With equal hops `D / K`, the energy as a function of a real-valued hop
//! count is convex and its stationary point gives the characteristic
//! distance `D / K*` ([`dchar1`], [`dchar2`]).

use crate::error::{Error, Result};
use crate::radio::{positive, RadioParams};
use crate::spacing::SpacingVector;

/// Which energy model a relay computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayCase {
    /// Transmit/receive electronics and amplifier only.
    NoIdle,
    /// Also charges idle-state energy over the cycle.
    WithIdle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnyToAnyScenario {
    distance: f64,
    packets: u64,
    cycle: f64,
    rate: f64,
}

impl AnyToAnyScenario {
    /// `distance` D in meters, `packets` A, cycle `T_d` in seconds and packet
    /// rate `P` in packets/s.
    pub fn new(distance: f64, packets: u64, cycle: f64, rate: f64) -> Result<Self> {
        positive("link distance D", distance)?;
        positive("cycle duration T_d", cycle)?;
        positive("packet rate P", rate)?;
        if packets == 0 {
            return Err(Error::invalid("packet count A must be >= 1"));
        }
        Ok(Self {
            distance,
            packets,
            cycle,
            rate,
        })
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn packets(&self) -> u64 {
        self.packets
    }

    pub fn cycle(&self) -> f64 {
        self.cycle
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Packet slots per cycle, `P * T_d`.
    pub fn slots(&self) -> f64 {
        self.rate * self.cycle
    }

    /// Relays send and receive every packet, so the cycle must hold `2A`
    /// slots.
    pub fn check_idle_feasible(&self) -> Result<()> {
        idle_feasible(self.packets, self.rate, self.cycle)
    }
}

fn idle_feasible(packets: u64, rate: f64, cycle: f64) -> Result<()> {
    let needed = 2.0 * packets as f64;
    if rate * cycle < needed {
        return Err(Error::InfeasibleScenario(format!(
            "P*T_d = {} < 2A = {needed}: relays would need negative idle time",
            rate * cycle
        )));
    }
    Ok(())
}

/// Equal-spacing plan for a relay chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopPlan {
    pub hops: usize,
    /// Per-hop distance `D / K`.
    pub spacing: f64,
    pub total_energy: f64,
}

/// Baseline energy of `k` equal hops over `distance`.
pub fn energy_case1(params: &RadioParams, distance: f64, k: usize, packets: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("hop count K must be >= 1"));
    }
    energy_case1_real(params, distance, k as f64, packets)
}

/// [`energy_case1`] with the hop count extended to the reals.
pub fn energy_case1_real(params: &RadioParams, distance: f64, k: f64, packets: u64) -> Result<f64> {
    positive("hop count K", k)?;
    positive("link distance D", distance)?;
    if packets == 0 {
        return Err(Error::invalid("packet count A must be >= 1"));
    }
    let a = packets as f64;
    let per_hop = params.e_t()
        + params.e_r()
        + params.e_d() * (distance / k).powf(params.path_loss_exponent());
    Ok(k * a * per_hop - params.e_r() * a)
}

/// Baseline energy for arbitrary hop lengths.
pub fn energy_case1_general(
    params: &RadioParams,
    spacing: &SpacingVector,
    packets: u64,
) -> Result<f64> {
    if packets == 0 {
        return Err(Error::invalid("packet count A must be >= 1"));
    }
    let a = packets as f64;
    let n = params.path_loss_exponent();
    let per_packet: f64 = spacing
        .hops()
        .iter()
        .map(|h| (params.e_t() + params.e_d() * h.powf(n)) + params.e_r())
        .sum();
    Ok(per_packet * a - params.e_r() * a)
}

/// Characteristic distance of the baseline model. Does not depend on the
/// traffic.
pub fn dchar1(params: &RadioParams) -> f64 {
    let n = params.path_loss_exponent();
    ((params.e_t() + params.e_r()) / (params.e_d() * (n - 1.0))).powf(1.0 / n)
}

/// Idle-aware energy of `k` equal hops.
pub fn energy_case2(params: &RadioParams, scenario: &AnyToAnyScenario, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("hop count K must be >= 1"));
    }
    energy_case2_real(params, scenario, k as f64)
}

/// [`energy_case2`] with the hop count extended to the reals.
pub fn energy_case2_real(params: &RadioParams, scenario: &AnyToAnyScenario, k: f64) -> Result<f64> {
    scenario.check_idle_feasible()?;
    let base = energy_case1_real(params, scenario.distance, k, scenario.packets)?;
    let a = scenario.packets as f64;
    Ok(base + k * params.e_id() * (scenario.slots() - 2.0 * a) + params.e_id() * a)
}

/// Idle-aware energy for arbitrary hop lengths. The spacing must span the
/// scenario's link distance.
pub fn energy_case2_general(
    params: &RadioParams,
    scenario: &AnyToAnyScenario,
    spacing: &SpacingVector,
) -> Result<f64> {
    scenario.check_idle_feasible()?;
    check_span(scenario, spacing)?;
    let base = energy_case1_general(params, spacing, scenario.packets)?;
    let a = scenario.packets as f64;
    let nodes = spacing.len() as f64;
    Ok(base + nodes * params.e_id() * (scenario.slots() - 2.0 * a) + params.e_id() * a)
}

pub(crate) fn check_span(scenario: &AnyToAnyScenario, spacing: &SpacingVector) -> Result<()> {
    let d = scenario.distance;
    if (spacing.total() - d).abs() > crate::spacing::SUM_TOLERANCE * d {
        return Err(Error::invalid(format!(
            "spacing spans {} m but the scenario link is {d} m",
            spacing.total()
        )));
    }
    Ok(())
}

/// Characteristic distance of the idle-aware model for `packets` packets per
/// cycle of `cycle` seconds at `rate` packets/s.
pub fn dchar2(params: &RadioParams, packets: u64, rate: f64, cycle: f64) -> Result<f64> {
    if packets == 0 {
        return Err(Error::invalid("packet count A must be >= 1"));
    }
    positive("packet rate P", rate)?;
    positive("cycle duration T_d", cycle)?;
    idle_feasible(packets, rate, cycle)?;
    let a = packets as f64;
    let n = params.path_loss_exponent();
    let num = (params.e_t() + params.e_r()) * a + params.e_id() * (rate * cycle - 2.0 * a);
    Ok((num / (params.e_d() * (n - 1.0) * a)).powf(1.0 / n))
}

/// Characteristic distance for the chosen model.
pub fn characteristic_distance(
    params: &RadioParams,
    scenario: &AnyToAnyScenario,
    case: RelayCase,
) -> Result<f64> {
    match case {
        RelayCase::NoIdle => Ok(dchar1(params)),
        RelayCase::WithIdle => dchar2(params, scenario.packets, scenario.rate, scenario.cycle),
    }
}

/// Equal-spacing energy of `k` hops for the chosen model.
pub fn energy_for_case(
    params: &RadioParams,
    scenario: &AnyToAnyScenario,
    case: RelayCase,
    k: usize,
) -> Result<f64> {
    match case {
        RelayCase::NoIdle => energy_case1(params, scenario.distance, k, scenario.packets),
        RelayCase::WithIdle => energy_case2(params, scenario, k),
    }
}

/// Best integer hop count. The real optimum `D / d_char` is rounded both
/// ways (never below one hop) and the cheaper candidate wins, preferring
/// fewer hops on a tie.
pub fn optimal_hop_count(
    params: &RadioParams,
    scenario: &AnyToAnyScenario,
    case: RelayCase,
) -> Result<HopPlan> {
    let k_real = scenario.distance / characteristic_distance(params, scenario, case)?;
    let lower = (k_real.floor() as usize).max(1);
    let upper = (k_real.ceil() as usize).max(1);

    let mut best = (lower, energy_for_case(params, scenario, case, lower)?);
    if upper != lower {
        let e = energy_for_case(params, scenario, case, upper)?;
        if e < best.1 {
            best = (upper, e);
        }
    }
    Ok(HopPlan {
        hops: best.0,
        spacing: scenario.distance / best.0 as f64,
        total_energy: best.1,
    })
}

/// `(A, d_char2)` for each packet count, in input order.
pub fn sweep_dchar2(
    params: &RadioParams,
    rate: f64,
    cycle: f64,
    packet_counts: &[u64],
) -> Result<Vec<(u64, f64)>> {
    packet_counts
        .iter()
        .map(|&a| {
            dchar2(params, a, rate, cycle)
                .map(|d| (a, d))
                .map_err(|e| Error::invalid(format!("packet count A = {a}: {e}")))
        })
        .collect()
}
