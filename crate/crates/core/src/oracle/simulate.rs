use crate::any_to_any::AnyToAnyScenario;
use crate::error::{Error, Result};
use crate::many_to_one::{GatheringScenario, NodeEnergyReport};
use crate::radio::RadioParams;
use crate::spacing::{SpacingVector, SUM_TOLERANCE};

/// Per-node traffic counters, indexed 1..=K (slot 0 is the sink).
#[derive(Debug, Default)]
struct Tally {
    tx: Vec<u64>,
    rx: Vec<u64>,
}

impl Tally {
    fn new(nodes: usize) -> Self {
        Self {
            tx: vec![0; nodes + 1],
            rx: vec![0; nodes + 1],
        }
    }

    /// Walks one packet from `origin` down to the sink. The sink's
    /// reception is not recorded.
    fn forward(&mut self, origin: usize) {
        let mut at = origin;
        while at >= 1 {
            self.tx[at] += 1;
            at -= 1;
            if at >= 1 {
                self.rx[at] += 1;
            }
        }
    }
}

fn check_span(spacing: &SpacingVector, distance: f64) -> Result<()> {
    if (spacing.total() - distance).abs() > SUM_TOLERANCE * distance {
        return Err(Error::invalid(format!(
            "spacing spans {} m but the link is {distance} m",
            spacing.total()
        )));
    }
    Ok(())
}

fn idle_seconds(node: usize, busy_slots: u64, rate: f64, cycle: f64) -> Result<f64> {
    let idle = cycle - busy_slots as f64 / rate;
    if idle < 0.0 {
        return Err(Error::InfeasibleScenario(format!(
            "node {node} is busy for {busy_slots} slots, more than the cycle holds"
        )));
    }
    Ok(idle)
}

/// Plays out one data-gathering cycle packet by packet: every node
/// originates one packet and each packet is relayed hop by hop to the sink.
pub fn simulate_cycle(
    params: &RadioParams,
    scenario: &GatheringScenario,
    spacing: &SpacingVector,
) -> Result<Vec<NodeEnergyReport>> {
    let nodes = scenario.nodes();
    if spacing.len() != nodes {
        return Err(Error::LengthMismatch {
            expected: nodes,
            actual: spacing.len(),
        });
    }
    check_span(spacing, scenario.distance())?;

    let mut tally = Tally::new(nodes);
    for origin in 1..=nodes {
        tally.forward(origin);
    }

    (1..=nodes)
        .map(|i| {
            let (tx, rx) = (tally.tx[i], tally.rx[i]);
            let idle_time = idle_seconds(i, tx + rx, scenario.rate(), scenario.cycle())?;
            let energy_tx = tx as f64 * params.tx_energy(spacing.hop(i)?)?;
            let energy_rx = rx as f64 * params.rx_energy();
            let energy_idle = params.idle_energy(idle_time, scenario.rate())?;
            Ok(NodeEnergyReport {
                node_index: i,
                packets_rx: rx,
                packets_tx: tx,
                idle_time,
                energy_tx,
                energy_rx,
                energy_idle,
                energy_total: energy_tx + energy_rx + energy_idle,
            })
        })
        .collect()
}

/// Relays the scenario's `A` packets from the farthest node (node `K`, with
/// `K = spacing.len()`) to the sink and prices the resulting traffic. With
/// `with_idle`, every node also pays for the slots it spends idle.
pub fn simulate_relay(
    params: &RadioParams,
    scenario: &AnyToAnyScenario,
    spacing: &SpacingVector,
    with_idle: bool,
) -> Result<f64> {
    check_span(spacing, scenario.distance())?;
    let nodes = spacing.len();
    let mut tally = Tally::new(nodes);
    for _ in 0..scenario.packets() {
        tally.forward(nodes);
    }

    let mut total = 0.0;
    for i in 1..=nodes {
        let (tx, rx) = (tally.tx[i], tally.rx[i]);
        total += tx as f64 * params.tx_energy(spacing.hop(i)?)?;
        total += rx as f64 * params.rx_energy();
        if with_idle {
            let idle = idle_seconds(i, tx + rx, scenario.rate(), scenario.cycle())?;
            total += params.idle_energy(idle, scenario.rate())?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_cycle() {
        let p = RadioParams::reference();
        let s = GatheringScenario::new(1, 40.0, 60.0, 1.0).unwrap();
        let r = simulate_cycle(&p, &s, &SpacingVector::equal(1, 40.0).unwrap()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].packets_tx, r[0].packets_rx), (1, 0));
        assert_eq!(r[0].idle_time, 59.0);
    }

    #[test]
    fn five_node_counts() {
        let p = RadioParams::reference();
        let s = GatheringScenario::new(5, 100.0, 60.0, 1.0).unwrap();
        let r = simulate_cycle(&p, &s, &SpacingVector::equal(5, 100.0).unwrap()).unwrap();
        let rx: Vec<u64> = r.iter().map(|n| n.packets_rx).collect();
        let tx: Vec<u64> = r.iter().map(|n| n.packets_tx).collect();
        assert_eq!(rx, vec![4, 3, 2, 1, 0]);
        assert_eq!(tx, vec![5, 4, 3, 2, 1]);
    }

    #[test]
    fn relay_single_hop_is_one_transmission() {
        let p = RadioParams::reference();
        let s = AnyToAnyScenario::new(70.0, 1, 60.0, 1.0).unwrap();
        let e = simulate_relay(&p, &s, &SpacingVector::equal(1, 70.0).unwrap(), false).unwrap();
        assert_eq!(e, p.tx_energy(70.0).unwrap());
    }

    #[test]
    fn relay_worked_examples() {
        let p = RadioParams::reference();
        let s = AnyToAnyScenario::new(100.0, 1, 60.0, 1.0).unwrap();
        let sp = SpacingVector::new(vec![50.0, 50.0]).unwrap();
        let e = simulate_relay(&p, &s, &sp, false).unwrap();
        assert!((e - 332.8e-6).abs() < 1e-12 * 332.8e-6);

        let s = AnyToAnyScenario::new(100.0, 10, 60.0, 1.0).unwrap();
        let e = simulate_relay(&p, &s, &sp, true).unwrap();
        assert!((e - 5.4016e-3).abs() < 1e-12 * 5.4016e-3);
    }

    #[test]
    fn relay_with_idle_rejects_overload() {
        let p = RadioParams::reference();
        let s = AnyToAnyScenario::new(100.0, 31, 60.0, 1.0).unwrap();
        let sp = SpacingVector::equal(2, 100.0).unwrap();
        assert!(simulate_relay(&p, &s, &sp, false).is_ok());
        assert!(matches!(
            simulate_relay(&p, &s, &sp, true),
            Err(Error::InfeasibleScenario(_))
        ));
    }

    #[test]
    fn rejects_spacing_for_other_link() {
        let p = RadioParams::reference();
        let s = GatheringScenario::new(2, 100.0, 60.0, 1.0).unwrap();
        assert!(simulate_cycle(&p, &s, &SpacingVector::equal(2, 90.0).unwrap()).is_err());
        assert!(simulate_cycle(&p, &s, &SpacingVector::equal(3, 100.0).unwrap()).is_err());
    }
}
