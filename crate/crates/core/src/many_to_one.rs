//! Data-gathering chains: each of the `K` nodes originates one packet per
//! cycle and forwards every packet from farther nodes, without aggregation.
//!
//! Node `i` (1 = next to the sink) receives `K - i` packets, transmits
//! `K - i + 1` and idles for the rest of the cycle. Summing the radio model
//! over a node gives
//!
//! ```text
//! E(i) = E1 - i * E2 + e_d * (K - i + 1) * h_i^n
//! E1   = e_t * (K + 1) + e_r * K + e_id * (P * T_d - 2K - 1)
//! E2   = e_t + e_r - 2 * e_id
//! ```
//!
//! Only the amplifier term depends on the spacing, so the constrained
//! minimum of the total has `(K - i + 1) * h_i^(n-1)` equal across nodes.

use crate::error::{Error, Result};
use crate::radio::{positive, RadioParams, MIN_PATH_LOSS_EXPONENT};
use crate::spacing::{SpacingVector, SUM_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GatheringScenario {
    nodes: usize,
    distance: f64,
    cycle: f64,
    rate: f64,
    packet_bits: Option<u64>,
    initial_energy: Option<f64>,
}

impl GatheringScenario {
    /// `nodes` K, link `distance` D in meters, cycle `T_d` in seconds and
    /// packet rate `P` in packets/s.
    pub fn new(nodes: usize, distance: f64, cycle: f64, rate: f64) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::invalid("node count K must be >= 1"));
        }
        positive("link distance D", distance)?;
        positive("cycle duration T_d", cycle)?;
        positive("packet rate P", rate)?;
        // node 1 forwards K - 1 packets and sends its own: 2K - 1 slots
        let busiest = (2 * nodes - 1) as f64;
        if rate * cycle < busiest {
            return Err(Error::InfeasibleScenario(format!(
                "P*T_d = {} < 2K - 1 = {busiest}: node 1 cannot fit its traffic into one cycle",
                rate * cycle
            )));
        }
        Ok(Self {
            nodes,
            distance,
            cycle,
            rate,
            packet_bits: None,
            initial_energy: None,
        })
    }

    /// Attaches packet length and initial node energy. Neither enters any
    /// energy computation.
    pub fn with_metadata(mut self, packet_bits: Option<u64>, initial_energy: Option<f64>) -> Self {
        self.packet_bits = packet_bits;
        self.initial_energy = initial_energy;
        self
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn cycle(&self) -> f64 {
        self.cycle
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn packet_bits(&self) -> Option<u64> {
        self.packet_bits
    }

    pub fn initial_energy(&self) -> Option<f64> {
        self.initial_energy
    }

    fn check_index(&self, i: usize) -> Result<()> {
        check_index(self.nodes, i)
    }

    fn check_spacing(&self, spacing: &SpacingVector) -> Result<()> {
        if spacing.len() != self.nodes {
            return Err(Error::LengthMismatch {
                expected: self.nodes,
                actual: spacing.len(),
            });
        }
        if (spacing.total() - self.distance).abs() > SUM_TOLERANCE * self.distance {
            return Err(Error::invalid(format!(
                "spacing spans {} m but the scenario link is {} m",
                spacing.total(),
                self.distance
            )));
        }
        Ok(())
    }
}

/// One node's bookkeeping for a single cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeEnergyReport {
    pub node_index: usize,
    pub packets_rx: u64,
    pub packets_tx: u64,
    /// Seconds.
    pub idle_time: f64,
    pub energy_tx: f64,
    pub energy_rx: f64,
    pub energy_idle: f64,
    pub energy_total: f64,
}

fn check_index(nodes: usize, i: usize) -> Result<()> {
    if i == 0 || i > nodes {
        Err(Error::IndexOutOfRange {
            index: i,
            count: nodes,
        })
    } else {
        Ok(())
    }
}

/// Packets node `i` receives per cycle: one from each farther node.
pub fn packets_received(nodes: usize, i: usize) -> Result<u64> {
    check_index(nodes, i)?;
    Ok((nodes - i) as u64)
}

/// Packets node `i` transmits per cycle, its own included.
pub fn packets_transmitted(nodes: usize, i: usize) -> Result<u64> {
    check_index(nodes, i)?;
    Ok((nodes - i + 1) as u64)
}

/// Seconds node `i` spends neither sending nor receiving.
pub fn idle_time(scenario: &GatheringScenario, i: usize) -> Result<f64> {
    scenario.check_index(i)?;
    let busy_slots = (2 * (scenario.nodes - i) + 1) as f64;
    let idle = scenario.cycle - busy_slots / scenario.rate;
    if idle < 0.0 {
        return Err(Error::InfeasibleScenario(format!(
            "node {i} would idle for {idle} s"
        )));
    }
    Ok(idle)
}

/// Spacing-independent part of every node's energy.
fn e1(params: &RadioParams, scenario: &GatheringScenario) -> f64 {
    let k = scenario.nodes as f64;
    params.e_t() * (k + 1.0)
        + params.e_r() * k
        + params.e_id() * (scenario.rate * scenario.cycle - 2.0 * k - 1.0)
}

/// Per-index saving: one fewer packet to send and receive, two more idle
/// slots.
fn e2(params: &RadioParams) -> f64 {
    params.e_t() + params.e_r() - 2.0 * params.e_id()
}

/// Energy report for node `i`. The total comes from the closed form; the
/// component fields are direct per-packet accounting.
pub fn node_energy(
    params: &RadioParams,
    scenario: &GatheringScenario,
    spacing: &SpacingVector,
    i: usize,
) -> Result<NodeEnergyReport> {
    scenario.check_index(i)?;
    scenario.check_spacing(spacing)?;
    let k = scenario.nodes;
    let h = spacing.hop(i)?;
    let rx = packets_received(k, i)?;
    let tx = packets_transmitted(k, i)?;
    let t_idle = idle_time(scenario, i)?;

    let energy_tx = tx as f64 * params.tx_energy(h)?;
    let energy_rx = rx as f64 * params.rx_energy();
    let energy_idle = params.idle_energy(t_idle, scenario.rate)?;

    let n = params.path_loss_exponent();
    let energy_total =
        e1(params, scenario) - i as f64 * e2(params) + params.e_d() * tx as f64 * h.powf(n);

    Ok(NodeEnergyReport {
        node_index: i,
        packets_rx: rx,
        packets_tx: tx,
        idle_time: t_idle,
        energy_tx,
        energy_rx,
        energy_idle,
        energy_total,
    })
}

/// Reports for nodes `1..=K`, in index order.
pub fn node_energies(
    params: &RadioParams,
    scenario: &GatheringScenario,
    spacing: &SpacingVector,
) -> Result<Vec<NodeEnergyReport>> {
    (1..=scenario.nodes)
        .map(|i| node_energy(params, scenario, spacing, i))
        .collect()
}

/// Network energy for one cycle.
pub fn total_energy(
    params: &RadioParams,
    scenario: &GatheringScenario,
    spacing: &SpacingVector,
) -> Result<f64> {
    Ok(node_energies(params, scenario, spacing)?
        .iter()
        .map(|r| r.energy_total)
        .sum())
}

/// Energy-minimizing hop lengths for `nodes` nodes over `distance` meters.
///
/// `h_i` is proportional to `(K - i + 1)^(-1/(n-1))`: nodes that relay more
/// traffic get shorter hops. The result does not depend on any radio
/// energy coefficient.
pub fn optimal_spacing(n: f64, nodes: usize, distance: f64) -> Result<SpacingVector> {
    if !n.is_finite() || n < MIN_PATH_LOSS_EXPONENT {
        return Err(Error::invalid(format!(
            "path loss exponent n must be > 1, got {n}"
        )));
    }
    if nodes == 0 {
        return Err(Error::invalid("node count K must be >= 1"));
    }
    let exponent = -1.0 / (n - 1.0);
    let weights: Vec<f64> = (1..=nodes)
        .map(|i| ((nodes - i + 1) as f64).powf(exponent))
        .collect();
    SpacingVector::from_weights(&weights, distance)
}

/// The per-node marginal cost `(K - i + 1) * n * e_d * h_i^(n-1)`. At the
/// constrained optimum these all equal the Lagrange multiplier.
pub fn marginal_costs(params: &RadioParams, spacing: &SpacingVector) -> Vec<f64> {
    let k = spacing.len();
    let n = params.path_loss_exponent();
    spacing
        .hops()
        .iter()
        .enumerate()
        .map(|(idx, h)| (k - idx) as f64 * n * params.e_d() * h.powf(n - 1.0))
        .collect()
}

/// `(max - min) / mean` of a set of positive values.
pub fn relative_spread(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(*v), hi.max(*v))
        });
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (hi - lo) / mean
}
