use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{Paradigm, RunConfig};
use super::format::sig6;
use crate::any_to_any::{self, AnyToAnyScenario, RelayCase};
use crate::error::{Error, Result};
use crate::many_to_one::{self, NodeEnergyReport};
use crate::oracle::{self, MinimizerSettings, ProbeTarget};
use crate::spacing::SpacingVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Human,
}

pub const SWEEP_HEADER: &str = "A,d_char2_m";
pub const NODE_HEADER: &str = "i,h_i_m,A_rx,A_tx,T_idle_s,E_i_J";
pub const DCHAR_HEADER: &str = "case,d_char_m,D_m,K_real,K,hop_m,E_J";

/// Characteristic distance and, when `D` is configured, the implied hop
/// counts.
pub fn cmd_dchar(cfg: &RunConfig, case: RelayCase, format: OutputFormat) -> Result<String> {
    cfg.require_paradigm(Paradigm::AnyToAny)?;
    let (label, dchar, scenario) = match case {
        RelayCase::NoIdle => {
            let scenario = match cfg.distance {
                // T_d and P never enter the baseline model; any feasible
                // placeholder will do when they are absent
                Some(d) => {
                    let packets = cfg.packets.unwrap_or(1);
                    let rate = cfg.rate.unwrap_or(1.0);
                    let cycle = cfg.cycle.unwrap_or(packets as f64 * 2.0 / rate);
                    Some(AnyToAnyScenario::new(d, packets, cycle, rate)?)
                }
                None => None,
            };
            (1, any_to_any::dchar1(&cfg.radio), scenario)
        }
        RelayCase::WithIdle => {
            let (a, p, t) = (cfg.packets()?, cfg.rate()?, cfg.cycle()?);
            let dchar = any_to_any::dchar2(&cfg.radio, a, p, t)?;
            let scenario = match cfg.distance {
                Some(d) => Some(AnyToAnyScenario::new(d, a, t, p)?),
                None => None,
            };
            (2, dchar, scenario)
        }
    };
    let plan = scenario
        .map(|s| any_to_any::optimal_hop_count(&cfg.radio, &s, case).map(|plan| (s, plan)))
        .transpose()?;

    let mut out = String::new();
    match format {
        OutputFormat::Human => {
            writeln!(out, "d_char{label} = {} m", sig6(dchar)).unwrap();
            if let Some((s, plan)) = plan {
                writeln!(
                    out,
                    "D = {} m: K_real = {}, K = {}, hop = {} m, E = {} J",
                    sig6(s.distance()),
                    sig6(s.distance() / dchar),
                    plan.hops,
                    sig6(plan.spacing),
                    sig6(plan.total_energy)
                )
                .unwrap();
            }
        }
        OutputFormat::Csv => {
            writeln!(out, "{DCHAR_HEADER}").unwrap();
            match plan {
                Some((s, plan)) => writeln!(
                    out,
                    "{label},{},{},{},{},{},{}",
                    sig6(dchar),
                    sig6(s.distance()),
                    sig6(s.distance() / dchar),
                    plan.hops,
                    sig6(plan.spacing),
                    sig6(plan.total_energy)
                )
                .unwrap(),
                None => writeln!(out, "{label},{},,,,,", sig6(dchar)).unwrap(),
            }
        }
    }
    Ok(out)
}

/// Idle-aware characteristic distance over `A = a_min, a_min + a_step, ...,
/// <= a_max`.
pub fn cmd_sweep(
    cfg: &RunConfig,
    a_min: u64,
    a_max: u64,
    a_step: u64,
    format: OutputFormat,
) -> Result<String> {
    cfg.require_paradigm(Paradigm::AnyToAny)?;
    if a_min == 0 || a_step == 0 || a_min > a_max {
        return Err(Error::invalid(format!(
            "sweep range needs 1 <= a_min <= a_max and a_step >= 1, got {a_min}..={a_max} step {a_step}"
        )));
    }
    let counts: Vec<u64> = (a_min..=a_max).step_by(a_step as usize).collect();
    let rows = any_to_any::sweep_dchar2(&cfg.radio, cfg.rate()?, cfg.cycle()?, &counts)?;

    let mut out = String::new();
    if format == OutputFormat::Csv {
        writeln!(out, "{SWEEP_HEADER}").unwrap();
    }
    for (a, d) in rows {
        match format {
            OutputFormat::Csv => writeln!(out, "{a},{}", sig6(d)).unwrap(),
            OutputFormat::Human => writeln!(out, "A = {a}: d_char2 = {} m", sig6(d)).unwrap(),
        }
    }
    Ok(out)
}

/// Per-node report at the energy-minimizing spacing.
pub fn cmd_spacing(cfg: &RunConfig, format: OutputFormat) -> Result<String> {
    cfg.require_paradigm(Paradigm::ManyToOne)?;
    let scenario = cfg.gathering_scenario()?;
    let spacing = many_to_one::optimal_spacing(
        cfg.radio.path_loss_exponent(),
        scenario.nodes(),
        scenario.distance(),
    )?;
    node_table(cfg, &spacing, format)
}

/// Per-node report at a caller-supplied spacing, equal hops by default.
pub fn cmd_energy(cfg: &RunConfig, hops: Option<Vec<f64>>, format: OutputFormat) -> Result<String> {
    cfg.require_paradigm(Paradigm::ManyToOne)?;
    let scenario = cfg.gathering_scenario()?;
    let spacing = match hops {
        Some(h) => SpacingVector::with_total(h, scenario.distance())?,
        None => SpacingVector::equal(scenario.nodes(), scenario.distance())?,
    };
    node_table(cfg, &spacing, format)
}

fn node_table(cfg: &RunConfig, spacing: &SpacingVector, format: OutputFormat) -> Result<String> {
    let scenario = cfg.gathering_scenario()?;
    let reports: Vec<NodeEnergyReport> =
        many_to_one::node_energies(&cfg.radio, &scenario, spacing)?;
    let total: f64 = reports.iter().map(|r| r.energy_total).sum();

    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{NODE_HEADER}").unwrap();
            for (r, h) in reports.iter().zip(spacing.hops()) {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.node_index,
                    sig6(*h),
                    r.packets_rx,
                    r.packets_tx,
                    sig6(r.idle_time),
                    sig6(r.energy_total)
                )
                .unwrap();
            }
            writeln!(out, "total,,,,,{}", sig6(total)).unwrap();
        }
        OutputFormat::Human => {
            writeln!(
                out,
                "K = {}, D = {} m, n = {}",
                scenario.nodes(),
                sig6(scenario.distance()),
                sig6(cfg.radio.path_loss_exponent())
            )
            .unwrap();
            writeln!(
                out,
                "{:>5} {:>12} {:>6} {:>6} {:>12} {:>12}",
                "node", "h_i [m]", "A_rx", "A_tx", "T_idle [s]", "E_i [J]"
            )
            .unwrap();
            for (r, h) in reports.iter().zip(spacing.hops()) {
                writeln!(
                    out,
                    "{:>5} {:>12} {:>6} {:>6} {:>12} {:>12}",
                    r.node_index,
                    sig6(*h),
                    r.packets_rx,
                    r.packets_tx,
                    sig6(r.idle_time),
                    sig6(r.energy_total)
                )
                .unwrap();
            }
            writeln!(out, "E_tot = {} J", sig6(total)).unwrap();
            if scenario.packet_bits().is_some() || scenario.initial_energy().is_some() {
                let bits = scenario
                    .packet_bits()
                    .map_or("-".to_string(), |b| b.to_string());
                let e0 = scenario.initial_energy().map_or("-".to_string(), sig6);
                writeln!(
                    out,
                    "B = {bits} bits, E_0 = {e0} J (not used in the energy model)"
                )
                .unwrap();
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub residual: f64,
    pub limit: f64,
}

impl Check {
    /// Passes when `residual <= limit`.
    pub fn bounded(name: &'static str, residual: f64, limit: f64) -> Self {
        let status = if residual <= limit {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            name,
            status,
            residual,
            limit,
        }
    }

    fn skipped(name: &'static str) -> Self {
        Self {
            name,
            status: CheckStatus::Skip,
            residual: 0.0,
            limit: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        if format == OutputFormat::Csv {
            writeln!(out, "check,status,residual,limit").unwrap();
        }
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skip => "SKIP",
            };
            match format {
                OutputFormat::Csv => writeln!(
                    out,
                    "{},{status},{},{}",
                    c.name,
                    sig6(c.residual),
                    sig6(c.limit)
                )
                .unwrap(),
                OutputFormat::Human => writeln!(
                    out,
                    "{status} {:<34} residual = {:.3e}  limit = {:.1e}",
                    c.name, c.residual, c.limit
                )
                .unwrap(),
            }
        }
        if format == OutputFormat::Human {
            let failed = self
                .checks
                .iter()
                .filter(|c| c.status == CheckStatus::Fail)
                .count();
            writeln!(out, "{} checks, {failed} failed", self.checks.len()).unwrap();
        }
        out
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Runs every oracle cross-check against the configured scenario.
pub fn cmd_validate(cfg: &RunConfig, trials: usize, seed: u64) -> Result<ValidationReport> {
    if trials == 0 {
        return Err(Error::invalid("--trials must be >= 1"));
    }
    let params = &cfg.radio;
    let n = params.path_loss_exponent();
    let relay = cfg.relay_scenario()?;
    let gathering = cfg.gathering_scenario()?;
    let nodes = gathering.nodes();
    let distance = gathering.distance();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // packet bookkeeping
    let equal = SpacingVector::equal(nodes, distance)?;
    let simulated = oracle::simulate_cycle(params, &gathering, &equal)?;
    let mut count_mismatches = 0u64;
    let mut time_residual = 0.0f64;
    for r in &simulated {
        let i = r.node_index;
        if r.packets_rx != many_to_one::packets_received(nodes, i)?
            || r.packets_tx != many_to_one::packets_transmitted(nodes, i)?
        {
            count_mismatches += 1;
        }
        let busy = (r.packets_rx + r.packets_tx) as f64 / gathering.rate();
        time_residual = time_residual.max(rel_err(busy + r.idle_time, gathering.cycle()));
        time_residual =
            time_residual.max(rel_err(many_to_one::idle_time(&gathering, i)?, r.idle_time));
    }
    checks.push(Check::bounded(
        "packet_counts",
        count_mismatches as f64,
        0.0,
    ));
    checks.push(Check::bounded(
        "busy_plus_idle_equals_cycle",
        time_residual,
        1e-12,
    ));

    // closed-form node energy vs simulated cycle
    let optimal = many_to_one::optimal_spacing(n, nodes, distance)?;
    let mut spacings = vec![equal.clone(), optimal.clone()];
    for _ in 0..trials {
        spacings.push(oracle::random_spacing(&mut rng, nodes, distance)?);
    }
    let mut worst = 0.0f64;
    for spacing in &spacings {
        let closed = many_to_one::node_energies(params, &gathering, spacing)?;
        let sim = oracle::simulate_cycle(params, &gathering, spacing)?;
        for (c, s) in closed.iter().zip(&sim) {
            worst = worst.max(rel_err(c.energy_total, s.energy_total));
        }
    }
    checks.push(Check::bounded(
        "node_energy_vs_simulated_cycle",
        worst,
        1e-12,
    ));

    // relay energy vs simulated forwarding
    let max_packets = (relay.slots() / 2.0).floor() as u64;
    let (mut worst_plain, mut worst_idle) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let hops = rng.random_range(1..=10);
        let spacing = oracle::random_spacing(&mut rng, hops, distance)?;
        let packets = rng.random_range(1..=max_packets.max(1));
        let scenario = AnyToAnyScenario::new(distance, packets, relay.cycle(), relay.rate())?;
        let sim = oracle::simulate_relay(params, &scenario, &spacing, false)?;
        let closed = any_to_any::energy_case1_general(params, &spacing, packets)?;
        worst_plain = worst_plain.max(rel_err(closed, sim));
        if max_packets >= 1 {
            let sim = oracle::simulate_relay(params, &scenario, &spacing, true)?;
            let closed = any_to_any::energy_case2_general(params, &scenario, &spacing)?;
            worst_idle = worst_idle.max(rel_err(closed, sim));
        }
    }
    checks.push(Check::bounded(
        "relay_energy_vs_simulation",
        worst_plain,
        1e-12,
    ));
    if max_packets >= 1 {
        checks.push(Check::bounded(
            "relay_idle_energy_vs_simulation",
            worst_idle,
            1e-12,
        ));
    } else {
        checks.push(Check::skipped("relay_idle_energy_vs_simulation"));
    }

    // closed-form optimal spacing vs numerical minimizer
    match oracle::minimize_spacing_numeric(params, &gathering, &MinimizerSettings::default()) {
        Ok(numeric) => {
            let worst = optimal
                .hops()
                .iter()
                .zip(numeric.spacing.hops())
                .map(|(c, m)| rel_err(*m, *c))
                .fold(0.0, f64::max);
            checks.push(Check::bounded("optimal_spacing_vs_minimizer", worst, 1e-6));
        }
        Err(Error::NoConvergence { residual, .. }) => {
            checks.push(Check::bounded(
                "optimal_spacing_vs_minimizer",
                residual,
                0.0,
            ));
        }
        Err(e) => return Err(e),
    }
    let spread = many_to_one::relative_spread(&many_to_one::marginal_costs(params, &optimal));
    checks.push(Check::bounded("optimal_spacing_stationarity", spread, 1e-9));

    // random spacings vs equal (relay) and optimal (gathering) references
    let reference = any_to_any::energy_case1(params, distance, nodes, relay.packets())?;
    let probe = oracle::random_spacing_probe(
        params,
        &ProbeTarget::Relay {
            scenario: relay,
            hops: nodes,
            case: RelayCase::NoIdle,
        },
        reference,
        trials,
        seed,
    )?;
    checks.push(Check::bounded(
        "equal_spacing_probe_no_idle",
        probe.violations as f64,
        0.0,
    ));
    if relay.check_idle_feasible().is_ok() {
        let reference = any_to_any::energy_case2(params, &relay, nodes)?;
        let probe = oracle::random_spacing_probe(
            params,
            &ProbeTarget::Relay {
                scenario: relay,
                hops: nodes,
                case: RelayCase::WithIdle,
            },
            reference,
            trials,
            seed,
        )?;
        checks.push(Check::bounded(
            "equal_spacing_probe_with_idle",
            probe.violations as f64,
            0.0,
        ));
    } else {
        checks.push(Check::skipped("equal_spacing_probe_with_idle"));
    }
    let optimum = many_to_one::total_energy(params, &gathering, &optimal)?;
    let probe = oracle::random_spacing_probe(
        params,
        &ProbeTarget::Gathering(gathering),
        optimum,
        trials,
        seed,
    )?;
    let equal_energy = many_to_one::total_energy(params, &gathering, &equal)?;
    let undercut = probe.violations as f64
        + if equal_energy < optimum * (1.0 - 1e-9) {
            1.0
        } else {
            0.0
        };
    checks.push(Check::bounded("optimal_spacing_probe", undercut, 0.0));

    // integer grid search vs floor/ceil hop selection
    for (name, case) in [
        ("grid_search_hops_no_idle", RelayCase::NoIdle),
        ("grid_search_hops_with_idle", RelayCase::WithIdle),
    ] {
        if case == RelayCase::WithIdle && relay.check_idle_feasible().is_err() {
            checks.push(Check::skipped(name));
            continue;
        }
        let plan = any_to_any::optimal_hop_count(params, &relay, case)?;
        let k_real = distance / any_to_any::characteristic_distance(params, &relay, case)?;
        let k_max = 2 * k_real.ceil() as usize + 10;
        let (k, _) = oracle::grid_search_hops(
            |k| {
                match case {
                    RelayCase::NoIdle => {
                        any_to_any::energy_case1_real(params, distance, k, relay.packets())
                    }
                    RelayCase::WithIdle => any_to_any::energy_case2_real(params, &relay, k),
                }
                .unwrap_or(f64::INFINITY)
            },
            k_max,
        )?;
        checks.push(Check::bounded(name, k.abs_diff(plan.hops) as f64, 0.0));
    }

    // the two characteristic distances coincide when relays never idle
    let slots = relay.slots();
    if slots.fract() == 0.0 && slots >= 2.0 && (slots as u64).is_multiple_of(2) {
        let full = any_to_any::dchar2(params, slots as u64 / 2, relay.rate(), relay.cycle())?;
        let residual = rel_err(full, any_to_any::dchar1(params));
        checks.push(Check::bounded(
            "dchar2_equals_dchar1_at_full_load",
            residual,
            1e-9,
        ));
    } else {
        checks.push(Check::skipped("dchar2_equals_dchar1_at_full_load"));
    }

    Ok(ValidationReport { checks })
}
