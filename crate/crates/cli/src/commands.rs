use std::path::Path;

use serde_json::{json, Value};
use tugame::format::{parse_coalition, parse_game, parse_vector, serialize_game};
use tugame::game::{
    is_convex, is_monotone, is_superadditive, is_zero_monotone, shapley_value, veto_players,
};
use tugame::lp::{
    balanced_weights, core_contains, core_nonempty, least_core, least_core_vertices,
    prenucleolus_lp_run, DEFAULT_VERTEX_CAP,
};
use tugame::prekernel::{default_max_iter, solve_prekernel, SolveStatus, SolveTrace};
use tugame::rational::{format_rational, parse_rational};
use tugame::rgp::{ambiguity_witness, run_rgp_procedure, RgpRun, Verdict};
use tugame::stearns::{stearns_solve, StearnsError, TransferTrace};
use tugame::surplus::surplus_matrix;
use tugame::{Allocation, Coalition, TuGame};

use crate::report::{
    coalition, coalitions, matrix, rat, show_coalitions, show_matrix, show_vector, vector, Report,
};
use crate::{CliError, Command, Method};

pub fn run(command: Command, max_n: usize) -> Result<Report, CliError> {
    match command {
        Command::Prekernel {
            game,
            start,
            trace,
            max_iter,
        } => prekernel(&game, start.as_deref(), trace, max_iter, max_n),
        Command::Prenucleolus { game, method } => prenucleolus(&game, method, max_n),
        Command::Stearns {
            game,
            start,
            tol,
            max_steps,
            trace,
        } => stearns(&game, &start, &tol, max_steps, trace, max_n),
        Command::Leastcore { game, vertices } => leastcore(&game, vertices, max_n),
        Command::Core { game, check } => core(&game, check.as_deref(), max_n),
        Command::Props { game } => props(&game, max_n),
        Command::Shapley { game } => shapley(&game, max_n),
        Command::Balanced { n, collection } => balanced(n, &collection, max_n),
        Command::RgpAudit { game, supply } => rgp_audit(&game, supply.as_deref(), max_n),
        Command::Oracle { game } => oracle(&game, max_n),
    }
}

fn load(path: &Path, max_n: usize, report: &mut Report) -> Result<TuGame, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let v = parse_game(&text, max_n)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    report.input("game", Value::String(path.display().to_string()));
    report.input("players", json!(v.n()));
    report.game_digest(&serialize_game(&v));
    Ok(v)
}

fn allocation_arg(text: &str, v: &TuGame, name: &str) -> Result<Allocation, CliError> {
    let x = parse_vector(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))?;
    if x.len() != v.n() {
        return Err(CliError::Usage(format!(
            "--{name}: expected {} entries, got {}",
            v.n(),
            x.len()
        )));
    }
    Ok(Allocation::new(x))
}

fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Converged => "converged",
        SolveStatus::IterationCapHit => "iteration cap hit",
        SolveStatus::DegenerateSystem => "degenerate system",
    }
}

fn trace_json(trace: &SolveTrace) -> Value {
    Value::Array(
        trace
            .iterations
            .iter()
            .map(|it| {
                json!({
                    "x": vector(&it.x),
                    "selection": it.selection.pairs().iter().map(|p| json!({
                        "pair": [p.i + 1, p.j + 1],
                        "coalition": coalition(p.coalition),
                    })).collect::<Vec<_>>(),
                    "E": matrix(&it.system.e.to_rows()),
                    "alpha": vector(&it.system.alpha),
                    "Q": matrix(&it.system.q.to_rows()),
                    "a": vector(&it.system.a),
                })
            })
            .collect(),
    )
}

fn prekernel(
    path: &Path,
    start: Option<&str>,
    show_trace: bool,
    max_iter: Option<usize>,
    max_n: usize,
) -> Result<Report, CliError> {
    let mut report = Report::new("prekernel");
    let v = load(path, max_n, &mut report)?;
    let start = match start {
        Some(text) => allocation_arg(text, &v, "start")?,
        None => Allocation::equal_split(&v),
    };
    let cap = max_iter.unwrap_or_else(|| default_max_iter(v.n()));
    report.input("start", vector(&start));
    report.input("max_iter", json!(cap));
    let trace = solve_prekernel(&v, &start, cap).map_err(|e| CliError::Usage(e.to_string()))?;

    if show_trace {
        for (k, it) in trace.iterations.iter().enumerate() {
            report.line(format!("iteration {}", k + 1));
            report.line(format!("  x = {}", show_vector(&it.x)));
            let sel: Vec<String> = it
                .selection
                .pairs()
                .iter()
                .map(|p| format!("S{}{}={}", p.i + 1, p.j + 1, p.coalition))
                .collect();
            report.line(format!("  selection: {}", sel.join(" ")));
            report.line("  E =");
            for l in show_matrix(&it.system.e.to_rows(), "    ") {
                report.line(l);
            }
            report.line(format!("  alpha = {}", show_vector(&it.system.alpha)));
            report.line("  Q =");
            for l in show_matrix(&it.system.q.to_rows(), "    ") {
                report.line(l);
            }
            report.line(format!("  a = {}", show_vector(&it.system.a)));
        }
        report.line("surplus matrix at terminal point:");
        for l in show_matrix(&surplus_matrix(&v, &trace.terminal).rows(), "  ") {
            report.line(l);
        }
        report.result("trace", trace_json(&trace));
    }
    report.line(format!("status: {}", status_name(trace.status)));
    report.line(format!("steps: {}", trace.steps()));
    report.line(format!("pre-kernel: {}", show_vector(&trace.terminal)));
    report.result("status", json!(status_name(trace.status)));
    report.result("steps", json!(trace.steps()));
    report.result("allocation", vector(&trace.terminal));
    if trace.status != SolveStatus::Converged {
        report.nonconverged = true;
        report.diagnostic(format!(
            "no pre-kernel element reached; last point {}",
            show_vector(&trace.terminal)
        ));
    }
    Ok(report)
}

fn prenucleolus(path: &Path, method: Method, max_n: usize) -> Result<Report, CliError> {
    let mut report = Report::new("prenucleolus");
    let v = load(path, max_n, &mut report)?;
    let method_name = match method {
        Method::Conjugation => "conjugation",
        Method::LpOracle => "lp-oracle",
        Method::Both => "both",
    };
    report.input("method", json!(method_name));

    let conjugation = if method != Method::LpOracle {
        let start = Allocation::equal_split(&v);
        let trace = solve_prekernel(&v, &start, default_max_iter(v.n()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        report.line(format!(
            "conjugation: {} ({}, steps: {})",
            show_vector(&trace.terminal),
            status_name(trace.status),
            trace.steps()
        ));
        report.result(
            "conjugation",
            json!({
                "allocation": vector(&trace.terminal),
                "status": status_name(trace.status),
                "steps": trace.steps(),
            }),
        );
        if trace.status != SolveStatus::Converged {
            report.nonconverged = true;
        }
        Some(trace)
    } else {
        None
    };
    let oracle = (method != Method::Conjugation).then(|| {
        let run = prenucleolus_lp_run(&v);
        report.line(format!("lp-oracle: {}", show_vector(&run.allocation)));
        report.result("lp_oracle", vector(&run.allocation));
        run
    });

    if let (Some(trace), Some(run)) = (&conjugation, &oracle) {
        let agree = trace.status == SolveStatus::Converged && trace.terminal == run.allocation;
        report.line(format!(
            "cross-check: {}",
            if agree { "PASS" } else { "DISCREPANCY" }
        ));
        report.result(
            "cross_check",
            json!(if agree { "pass" } else { "discrepancy" }),
        );
        if !agree {
            let diff: Vec<_> = trace
                .terminal
                .iter()
                .zip(run.allocation.iter())
                .map(|(a, b)| a - b)
                .collect();
            report.diagnostic(format!(
                "conjugation minus lp-oracle: {}; the pre-kernel may not be single-valued",
                show_vector(&diff)
            ));
            report.result("difference", vector(&diff));
        }
    }
    Ok(report)
}

fn stearns(
    path: &Path,
    start: &str,
    tol: &str,
    max_steps: usize,
    show_trace: bool,
    max_n: usize,
) -> Result<Report, CliError> {
    let mut report = Report::new("stearns");
    let v = load(path, max_n, &mut report)?;
    let start = allocation_arg(start, &v, "start")?;
    let tol = parse_rational(tol).map_err(|e| CliError::Usage(format!("--tol: {e}")))?;
    report.input("start", vector(&start));
    report.input("tol", rat(&tol));
    report.input("max_steps", json!(max_steps));

    let (trace, failure) = match stearns_solve(&v, &start, &tol, max_steps) {
        Ok(t) => (t, None),
        Err(StearnsError::StepCapHit(t)) => (*t, Some("step cap reached")),
        Err(StearnsError::Stalled(t)) => {
            (*t, Some("stalled: paying player is at its singleton worth"))
        }
        Err(e) => return Err(CliError::Invalid(e.to_string())),
    };
    write_transfers(&mut report, &trace, show_trace);
    if let Some(reason) = failure {
        report.nonconverged = true;
        report.diagnostic(reason);
    }
    Ok(report)
}

fn write_transfers(report: &mut Report, trace: &TransferTrace, show_trace: bool) {
    if show_trace {
        for (k, step) in trace.steps.iter().enumerate() {
            report.line(format!(
                "step {}: {} pays {} delta = {} (delta* = {}) -> {}",
                k + 1,
                step.pair.1 + 1,
                step.pair.0 + 1,
                format_rational(&step.delta),
                format_rational(&step.delta_star),
                show_vector(&step.x_after)
            ));
        }
        report.result(
            "trace",
            Value::Array(
                trace
                    .steps
                    .iter()
                    .map(|s| {
                        json!({
                            "receiver": s.pair.0 + 1,
                            "payer": s.pair.1 + 1,
                            "delta": rat(&s.delta),
                            "delta_star": rat(&s.delta_star),
                            "x": vector(&s.x_after),
                        })
                    })
                    .collect(),
            ),
        );
    }
    report.line(format!("steps: {}", trace.steps.len()));
    report.line(format!(
        "relative gap: {}",
        format_rational(&trace.relative_gap)
    ));
    report.line(format!("allocation: {}", show_vector(&trace.terminal)));
    report.result("steps", json!(trace.steps.len()));
    report.result("relative_gap", rat(&trace.relative_gap));
    report.result("allocation", vector(&trace.terminal));
}

fn leastcore(path: &Path, vertices: bool, max_n: usize) -> Result<Report, CliError> {
    let mut report = Report::new("leastcore");
    let v = load(path, max_n, &mut report)?;
    let lc = least_core(&v).map_err(|e| CliError::Invalid(e.to_string()))?;
    report.line(format!("epsilon: {}", format_rational(&lc.epsilon)));
    report.line(format!("witness: {}", show_vector(&lc.witness)));
    report.line(format!("tight at witness: {}", show_coalitions(&lc.tight)));
    report.line(format!(
        "tight everywhere: {}",
        show_coalitions(&lc.universally_tight)
    ));
    report.line(format!("dimension: {}", lc.dimension()));
    report.result("epsilon", rat(&lc.epsilon));
    report.result("witness", vector(&lc.witness));
    report.result("tight", coalitions(&lc.tight));
    report.result("universally_tight", coalitions(&lc.universally_tight));
    report.result("dimension", json!(lc.dimension()));
    if vertices {
        let list = least_core_vertices(&v, DEFAULT_VERTEX_CAP)
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        report.line("vertices:");
        for x in &list {
            report.line(format!("  {}", show_vector(x)));
        }
        report.result(
            "vertices",
            Value::Array(list.iter().map(|x| vector(x)).collect()),
        );
    }
    Ok(report)
}

fn core(path: &Path, check: Option<&str>, max_n: usize) -> Result<Report, CliError> {
    let mut report = Report::new("core");
    let v = load(path, max_n, &mut report)?;
    let nonempty = core_nonempty(&v);
    report.line(format!("core nonempty: {}", yes_no(nonempty)));
    report.result("nonempty", json!(nonempty));
    if let Some(text) = check {
        let x = allocation_arg(text, &v, "check")?;
        let member = core_contains(&v, &x);
        report.input("check", vector(&x));
        report.line(format!("{} in core: {}", show_vector(&x), yes_no(member)));
        report.result("member", json!(member));
        if !member {
            let worst = v
                .proper_coalitions()
                .map(|s| (v.excess(s, &x), s))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
            if !v.is_efficient(&x) {
                report.diagnostic("allocation is not efficient");
            } else if let Some((e, s)) = worst {
                report.diagnostic(format!("coalition {s} has excess {}", format_rational(&e)));
            }
        }
    }
    Ok(report)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn props(path: &Path, max_n: usize) -> Result<Report, CliError> {
    let mut report = Report::new("props");
    let v = load(path, max_n, &mut report)?;
    let checks = [
        ("monotone", is_monotone(&v)),
        ("superadditive", is_superadditive(&v)),
        ("convex", is_convex(&v)),
        ("zero-monotone", is_zero_monotone(&v)),
    ];
    for (name, value) in checks {
        report.line(format!("{name}: {}", yes_no(value)));
        report.result(&name.replace('-', "_"), json!(value));
    }
    let veto = veto_players(&v);
    report.line(format!("veto players: {veto}"));
    report.result("veto_players", coalition(veto));
    Ok(report)
}

fn shapley(path: &Path, max_n: usize) -> Result<Report, CliError> {
    let mut report = Report::new("shapley");
    let v = load(path, max_n, &mut report)?;
    let phi = shapley_value(&v);
    report.line(format!("shapley: {}", show_vector(&phi)));
    report.result("shapley", vector(&phi));
    Ok(report)
}

fn balanced(n: usize, collection: &[String], max_n: usize) -> Result<Report, CliError> {
    let mut report = Report::new("balanced");
    if n == 0 || n > max_n {
        return Err(CliError::Usage(format!(
            "player count {n} outside 1..={max_n}"
        )));
    }
    let family: Vec<Coalition> = collection
        .iter()
        .map(|t| parse_coalition(t, n).map_err(|e| CliError::Usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    report.input("players", json!(n));
    report.input("collection", coalitions(&family));
    match balanced_weights(n, &family) {
        Some(w) => {
            report.line("balanced: yes");
            for (s, wk) in family.iter().zip(&w) {
                report.line(format!("  {s}: {}", format_rational(wk)));
            }
            report.result("balanced", json!(true));
            report.result("weights", vector(&w));
        }
        None => {
            report.line("balanced: no");
            report.result("balanced", json!(false));
        }
    }
    Ok(report)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::MatchesNucleolus => "matches nucleolus",
        Verdict::SelectionAmbiguous => "selection ambiguous",
        Verdict::Mismatch => "mismatch",
    }
}

fn run_json(run: &RgpRun) -> Value {
    json!({
        "per_player": vector(&run.per_player),
        "verdict": verdict_name(run.verdict),
        "levels": run.levels.iter().map(|l| json!({
            "player": l.player + 1,
            "level": l.level,
            "players": coalition(l.players),
            "epsilon": rat(&l.epsilon),
            "dimension": l.dimension,
            "chosen": coalition(l.chosen),
            "alternatives": coalitions(&l.alternatives),
            "forced": l.forced,
            "removed": coalition(l.removed),
            "removed_payoffs": vector(&l.removed_payoffs),
            "ambiguous": l.ambiguous,
        })).collect::<Vec<_>>(),
    })
}

fn rgp_audit(path: &Path, supply: Option<&str>, max_n: usize) -> Result<Report, CliError> {
    let mut report = Report::new("rgp-audit");
    let v = load(path, max_n, &mut report)?;
    let supplied = supply
        .map(|text| allocation_arg(text, &v, "supply"))
        .transpose()?;
    if let Some(x) = &supplied {
        report.input("supply", vector(x));
    }
    if !is_convex(&v) {
        report.diagnostic("game is not convex; the procedure is run for demonstration only");
    }
    let run =
        run_rgp_procedure(&v, supplied.as_ref()).map_err(|e| CliError::Invalid(e.to_string()))?;
    for l in &run.levels {
        report.line(format!(
            "player {} level {}: players {} epsilon {} dim {} chose {}{} removed {} paid {}{}",
            l.player + 1,
            l.level,
            l.players,
            format_rational(&l.epsilon),
            l.dimension,
            l.chosen,
            if l.forced { "" } else { " (unforced)" },
            l.removed,
            show_vector(&l.removed_payoffs),
            if l.ambiguous { " [ambiguous]" } else { "" }
        ));
    }
    report.line(format!("per-player: {}", show_vector(&run.per_player)));
    report.line(format!("pre-nucleolus: {}", show_vector(&run.nucleolus)));
    report.line(format!("verdict: {}", verdict_name(run.verdict)));
    report.result("run", run_json(&run));
    report.result("nucleolus", vector(&run.nucleolus));

    if v.n() <= DEFAULT_VERTEX_CAP {
        match ambiguity_witness(&v).map_err(|e| CliError::Invalid(e.to_string()))? {
            Some(w) => {
                report.line("two-vertex witness:");
                for (x, r) in [&w.first, &w.second] {
                    report.line(format!(
                        "  supply {} -> per-player {} ({})",
                        show_vector(x),
                        show_vector(&r.per_player),
                        verdict_name(r.verdict)
                    ));
                }
                report.result(
                    "witness",
                    json!([
                        {"supply": vector(&w.first.0), "per_player": vector(&w.first.1.per_player)},
                        {"supply": vector(&w.second.0), "per_player": vector(&w.second.1.per_player)},
                    ]),
                );
            }
            None => {
                report.line("two-vertex witness: none (least core has one vertex or runs agree)");
                report.result("witness", Value::Null);
            }
        }
    } else {
        report.diagnostic(format!(
            "vertex witness skipped above {DEFAULT_VERTEX_CAP} players"
        ));
    }
    Ok(report)
}

fn oracle(path: &Path, max_n: usize) -> Result<Report, CliError> {
    let mut report = Report::new("oracle");
    let v = load(path, max_n, &mut report)?;
    let run = prenucleolus_lp_run(&v);
    for (k, level) in run.levels.iter().enumerate() {
        report.line(format!(
            "level {}: epsilon {} fixes {}",
            k + 1,
            format_rational(&level.epsilon),
            show_coalitions(&level.fixed)
        ));
    }
    report.line(format!("pre-nucleolus: {}", show_vector(&run.allocation)));
    report.result("allocation", vector(&run.allocation));
    report.result(
        "levels",
        Value::Array(
            run.levels
                .iter()
                .map(|l| json!({"epsilon": rat(&l.epsilon), "fixed": coalitions(&l.fixed)}))
                .collect(),
        ),
    );
    Ok(report)
}
