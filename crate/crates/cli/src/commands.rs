use growthlab::bfile::{self, BFile};
use growthlab::expr::Classification;
use growthlab::graph::{
    flip_recover, flipped_paths, semi_induced_order, semi_induced_witness, DEFAULT_NODE_BUDGET,
};
use growthlab::orbit::{count_orbits_injective, truncate_expr};
use growthlab::partition::trivial_meet_pairs;
use growthlab::seq::{bell2_prefix, bell_prefix, parse_ratio, ratio_to_string, stirling_transform};
use growthlab::witness::{
    find_coding_witness, find_order_witness, find_tuple_coding_witness, verify, SearchOptions, SearchReport,
};
use growthlab::{BoundReport, Budget, FlipSpec, GridPoint, GroupExpr, IntSeq, SearchOutcome, Verdict};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{strings, Entry, Report, Status};
use crate::sources;
use crate::{BoundsArgs, Builtin, Cli, CliError, CountArgs, Field, GraphCommand, OeisArgs, SeqArgs, WitnessArgs, WitnessKind};

/// Brute-force trivial-meet counts cost `B_n^2` partition pairs.
const TRIVIAL_MEET_MAX_N: usize = 9;

/// Flip specs enumerated exhaustively at most.
const MAX_EXHAUSTIVE_FLIPS: u32 = 24;

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default();
    if let Some(t) = cli.budget_tuples {
        b.tuples = t;
    }
    b
}

fn node_budget(cli: &Cli, default: u64) -> u64 {
    cli.budget_nodes.unwrap_or(default)
}

fn common_config(cli: &Cli, r: &mut Report) {
    r.config("seed", cli.seed);
    r.config("deterministic", cli.deterministic);
    r.config("jobs", if cli.deterministic { Some(1) } else { cli.jobs }.map_or("auto".to_string(), |j| j.to_string()));
    if let Some(t) = cli.budget_tuples {
        r.config("budget_tuples", t);
    }
    if let Some(n) = cli.budget_nodes {
        r.config("budget_nodes", n);
    }
}

fn positive(name: &str, v: u64) -> Result<(), CliError> {
    if v == 0 {
        return Err(CliError::Input(format!("{name} must be positive")));
    }
    Ok(())
}

fn check_budgets(cli: &Cli) -> Result<(), CliError> {
    if let Some(t) = cli.budget_tuples {
        positive("--budget-tuples", t)?;
    }
    if let Some(n) = cli.budget_nodes {
        positive("--budget-nodes", n)?;
    }
    Ok(())
}

pub fn seq(cli: &Cli, a: &SeqArgs) -> Result<Report, CliError> {
    check_budgets(cli)?;
    let e = sources::expression(a.input.expr.as_deref(), a.input.file.as_deref())?;
    if a.max_n < 1 {
        return Err(CliError::Input("--max-n must be at least 1".into()));
    }
    let oracle_top = a.max_n.min(a.oracle_max_n);
    if let Some(m) = a.trunc_m {
        if a.oracle_check && m < oracle_top {
            return Err(CliError::Input(format!(
                "--trunc-m {m} is below the largest checked order {oracle_top}"
            )));
        }
    }
    let budget = budget(cli);
    let l = e.eval_lseq(a.max_n, &budget)?;
    let s = stirling_transform(&l);

    let mut r = Report::new("seq");
    common_config(cli, &mut r);
    r.config("expr", &e);
    r.config("max_n", a.max_n);
    r.config("oracle_check", a.oracle_check);
    if a.oracle_check {
        r.config("oracle_max_n", oracle_top);
    }
    if let Some(m) = a.trunc_m {
        r.config("trunc_m", m);
    }
    r.push(Entry::new("classification").value(e.classify().label()));

    let mut visited = 0u64;
    for n in 0..=a.max_n {
        let mut entry = Entry::new("l").n(n).value(&l[n]);
        if a.oracle_check && (1..=oracle_top).contains(&n) {
            let levels = a.trunc_m.map_or_else(|| vec![n, n + 1], |m| vec![m]);
            let (oracle, status) = oracle_at(&e, n, &levels, &l[n], &budget, &mut visited);
            r.raise(status);
            entry = entry.json("oracle", oracle);
        }
        r.push(entry);
    }
    for n in 0..=a.max_n {
        r.push(Entry::new("s").n(n).value(&s[n]));
    }
    if a.oracle_check {
        r.telemetry("oracle_tuples_visited", visited);
    }
    Ok(r)
}

fn oracle_at(
    e: &GroupExpr,
    n: usize,
    levels: &[usize],
    expected: &BigUint,
    budget: &Budget,
    visited: &mut u64,
) -> (Value, Status) {
    let mut truncations = Vec::new();
    let mut verdict = "agree";
    for &m in levels {
        let count = truncate_expr(e, m, budget).and_then(|g| count_orbits_injective(&g, n, budget));
        match count {
            Ok(c) => {
                *visited += c.tuples_visited;
                if &c.count != expected && verdict == "agree" {
                    verdict = "disagree";
                }
                truncations.push(json!({ "m": m.to_string(), "count": c.count.to_string() }));
            }
            Err(err) if err.is_capacity() => {
                verdict = "capacity";
                truncations.push(json!({ "m": m.to_string(), "count": "capacity" }));
            }
            Err(err) => {
                verdict = "error";
                truncations.push(json!({ "m": m.to_string(), "count": err.to_string() }));
            }
        }
    }
    let status = match verdict {
        "agree" => Status::Ok,
        "capacity" => Status::Capacity,
        _ => Status::Negative,
    };
    (json!({ "verdict": verdict, "truncations": truncations }), status)
}

/// Cellular grid `{1, 2, 10, 100, 10^4} x {1/2, 3/5, 2/3, 7/10, 3/4, 4/5, 9/10}`.
fn default_cellular_grid() -> Vec<GridPoint> {
    let cs = ["1", "2", "10", "100", "10000"];
    let ds = ["1/2", "3/5", "2/3", "7/10", "3/4", "4/5", "9/10"];
    cs.iter()
        .flat_map(|c| ds.iter().map(move |d| GridPoint::new(parse_ratio(c).unwrap(), parse_ratio(d).unwrap())))
        .collect()
}

pub fn parse_grid(text: Option<&str>) -> Result<(Vec<GridPoint>, Vec<BigRational>), CliError> {
    let mut cells = Vec::new();
    let mut cs = Vec::new();
    for item in text.unwrap_or_default().split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once(':') {
            Some((c, d)) => cells.push(GridPoint::new(parse_ratio(c)?, parse_ratio(d)?)),
            None => cs.push(parse_ratio(item)?),
        }
    }
    if cells.is_empty() {
        cells = default_cellular_grid();
    }
    if cs.is_empty() {
        cs.push(BigRational::from_integer(2.into()));
    }
    Ok((cells, cs))
}

fn bound_entry(b: &BoundReport) -> Entry {
    let mut e = Entry::new(b.kind.name())
        .verdict(if b.verdict.passed() { "pass" } else { "fail" })
        .maybe("c", b.c.as_ref().map(ratio_to_string))
        .maybe("d", b.d.as_ref().map(ratio_to_string))
        .maybe("n0", b.n0)
        .field("from", b.verified_range.start())
        .field("to", b.verified_range.end());
    if let Verdict::Fail { index } = b.verdict {
        e = e.field("fail_index", index);
    }
    if b.kind == growthlab::seq::BoundTag::BellLower {
        e = e.field("tight", b.tight);
    }
    e.maybe("d_estimate", b.d_estimate.map(|d| format!("{d:.6}")))
}

pub fn bounds(cli: &Cli, a: &BoundsArgs) -> Result<Report, CliError> {
    check_budgets(cli)?;
    let e = sources::expression(a.input.expr.as_deref(), a.input.file.as_deref())?;
    let (grid, cs) = parse_grid(a.grid.as_deref())?;
    let mut r = Report::new("bounds");
    common_config(cli, &mut r);
    r.config("expr", &e);
    r.config("max_n", a.max_n);
    r.config(
        "grid",
        grid.iter()
            .map(|p| format!("{}:{}", ratio_to_string(&p.c), ratio_to_string(&p.d)))
            .chain(cs.iter().map(ratio_to_string))
            .collect::<Vec<_>>()
            .join(","),
    );
    let class = e.classify();
    r.push(Entry::new("classification").value(class.label()));
    if class == Classification::Finite {
        r.push(Entry::new("bounds").verdict("not-applicable").field("note", "finite; no bounds applicable"));
        return Ok(r);
    }
    for b in e.gap_verdict(a.max_n, &grid, &cs, &budget(cli))? {
        if !b.verdict.passed() {
            r.raise(Status::Negative);
        }
        r.push(bound_entry(&b));
    }
    Ok(r)
}

pub fn oeis(cli: &Cli, a: &OeisArgs) -> Result<Report, CliError> {
    check_budgets(cli)?;
    let bf = BFile::parse(&sources::read(&a.bfile)?)?;
    let last = bf
        .entries
        .last()
        .map(|&(n, _)| n)
        .ok_or_else(|| CliError::Input(format!("{}: no entries", a.bfile.display())))?;
    let default_n = usize::try_from(last - a.offset).unwrap_or(0).max(1);
    let mut r = Report::new("oeis");
    common_config(cli, &mut r);
    r.config("bfile", a.bfile.display());
    r.config("offset", a.offset);

    let computed: IntSeq = match (a.builtin, &a.expr, &a.expr_file) {
        (Some(b), None, None) => {
            let n = a.max_n.unwrap_or(match b {
                Builtin::TrivialMeet => default_n.min(8),
                _ => default_n,
            });
            r.config("source", format!("{b:?}").to_lowercase());
            r.config("max_n", n);
            match b {
                Builtin::Bell => bell_prefix(n),
                Builtin::Bell2 => bell2_prefix(n),
                Builtin::TrivialMeet => {
                    if n > TRIVIAL_MEET_MAX_N {
                        return Err(growthlab::Error::Range(format!(
                            "trivial-meet counts are brute force; n <= {TRIVIAL_MEET_MAX_N}"
                        ))
                        .into());
                    }
                    let values: Vec<u64> = (0..=n).map(trivial_meet_pairs).collect();
                    IntSeq::from_u64s("trivial-meet", &values)
                }
            }
        }
        (None, text, file) if text.is_some() != file.is_some() => {
            let e = sources::expression(text.as_deref(), file.as_deref())?;
            let n = a.max_n.unwrap_or(default_n);
            r.config("source", &e);
            r.config("field", if a.field == Field::L { "l" } else { "s" });
            r.config("max_n", n);
            let l = e.eval_lseq(n, &budget(cli))?;
            match a.field {
                Field::L => l,
                Field::S => stirling_transform(&l),
            }
        }
        _ => {
            return Err(CliError::Input(
                "give exactly one of --builtin, --expr or --expr-file".into(),
            ))
        }
    };

    let cmp = bfile::compare(&computed, &bf, a.offset);
    let theirs: std::collections::HashMap<i64, String> =
        bf.entries.iter().map(|(n, v)| (*n, v.to_string())).collect();
    for &n in &cmp.compared {
        let idx = (n - a.offset) as usize;
        let ok = !cmp.mismatches.iter().any(|m| m.n == n);
        r.push(
            Entry::new("a")
                .field("n", n)
                .value(&computed[idx])
                .field("expected", &theirs[&n])
                .verdict(if ok { "match" } else { "mismatch" }),
        );
    }
    let agrees = cmp.agrees();
    r.push(
        Entry::new("agreement")
            .verdict(if agrees { "pass" } else { "fail" })
            .field("compared", cmp.compared.len())
            .field("mismatches", cmp.mismatches.len())
            .maybe("first", cmp.first_index())
            .maybe("last", cmp.last_index()),
    );
    if !agrees {
        r.raise(Status::Negative);
    }
    Ok(r)
}

pub fn graphs(cli: &Cli, cmd: &GraphCommand) -> Result<Report, CliError> {
    check_budgets(cli)?;
    match cmd {
        GraphCommand::Count(a) => graph_count(cli, a),
        GraphCommand::SemiInduced { graph, lax } => {
            let g = sources::graph(graph)?;
            let nodes = node_budget(cli, DEFAULT_NODE_BUDGET);
            let strict = !lax;
            let t = semi_induced_order(&g, strict, nodes)?;
            let mut r = Report::new("graphs semiinduced");
            common_config(cli, &mut r);
            r.config("graph", graph);
            r.config("reading", if strict { "strict" } else { "lax" });
            let mut entry = Entry::new("semi-induced-order").value(t);
            if t > 0 {
                if let Some(w) = semi_induced_witness(&g, t, strict, nodes)? {
                    entry = entry.json("witness", json!({ "a": strings(&w.a), "b": strings(&w.b) }));
                }
            }
            r.push(entry);
            Ok(r)
        }
        GraphCommand::FlipRoundTrip { k, seeds, copies, exhaustive } => {
            flip_round_trip(cli, *k, *seeds, *copies, *exhaustive)
        }
    }
}

fn graph_count(cli: &Cli, a: &CountArgs) -> Result<Report, CliError> {
    let class = sources::class(a.class.as_deref(), &a.generators, &a.forbidden)?;
    let ns: Vec<usize> = if a.n.is_empty() { (1..=a.max_n).collect() } else { a.n.clone() };
    let nodes = node_budget(cli, DEFAULT_NODE_BUDGET);
    let mut r = Report::new("graphs count");
    common_config(cli, &mut r);
    r.config("mode", format!("{:?}", class.mode).to_lowercase());
    r.config("class_graphs", class.graphs.len());
    if let Some(p) = &a.class {
        r.config("class", p.display());
    }
    for src in a.generators.iter().chain(&a.forbidden) {
        r.config("source", src);
    }
    r.config("n", ns.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    for n in ns {
        r.push(Entry::new("l").n(n).value(class.count_labelled(n, nodes)?));
    }
    Ok(r)
}

fn flip_round_trip(cli: &Cli, k: usize, seeds: u64, copies: usize, exhaustive: bool) -> Result<Report, CliError> {
    let target = flipped_paths(k, copies, &FlipSpec::empty(k))?;
    let specs: Vec<FlipSpec> = if exhaustive {
        let bits = (k * (k + 1) / 2) as u32;
        if bits > MAX_EXHAUSTIVE_FLIPS {
            return Err(CliError::Input(format!(
                "exhaustive flips at k={k} means 2^{bits} specs; at most 2^{MAX_EXHAUSTIVE_FLIPS}"
            )));
        }
        (0..1u64 << bits).map(|m| FlipSpec::from_mask(k, m)).collect()
    } else {
        (0..seeds)
            .map(|i| FlipSpec::random(k, &mut ChaCha8Rng::seed_from_u64(cli.seed.wrapping_add(i))))
            .collect()
    };
    let outcomes: Vec<bool> = specs
        .par_iter()
        .map(|spec| {
            let h = flipped_paths(k, copies, spec)?;
            Ok(flip_recover(&h)? == target)
        })
        .collect::<growthlab::Result<_>>()?;
    let failures: Vec<usize> = outcomes.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect();
    let mut r = Report::new("graphs fliproundtrip");
    common_config(cli, &mut r);
    r.config("k", k);
    r.config("copies", copies);
    r.config("specs", if exhaustive { "exhaustive".to_string() } else { format!("{seeds} seeded") });
    let mut entry = Entry::new("recovered")
        .value(outcomes.len() - failures.len())
        .field("total", outcomes.len())
        .verdict(if failures.is_empty() { "pass" } else { "fail" });
    if !failures.is_empty() {
        entry = entry.json("failed_specs", strings(failures.iter().take(20)));
        r.raise(Status::Negative);
    }
    r.push(entry);
    Ok(r)
}

fn outcome_status<W>(o: &SearchOutcome<W>) -> Status {
    match o {
        SearchOutcome::Found(_) => Status::Ok,
        SearchOutcome::None => Status::Negative,
        SearchOutcome::Indeterminate => Status::Indeterminate,
    }
}

pub fn witness(cli: &Cli, a: &WitnessArgs) -> Result<Report, CliError> {
    check_budgets(cli)?;
    let d = sources::relation(&a.relation)?;
    let opts = SearchOptions {
        node_budget: node_budget(cli, SearchOptions::default().node_budget),
        parallel: !cli.deterministic && cli.jobs != Some(1),
    };
    let kind = match a.kind {
        WitnessKind::Order => "order",
        WitnessKind::Coding => "coding",
        WitnessKind::Tuplecoding => "tuplecoding",
    };
    let mut r = Report::new(&format!("witness {kind}"));
    common_config(cli, &mut r);
    r.config("relation", &a.relation);
    r.config("universe", d.universe());
    r.config("arity", d.arity());
    r.config("size", a.size);
    if a.kind == WitnessKind::Tuplecoding {
        r.config("k", a.k);
    }

    let (entry, status, nodes) = match a.kind {
        WitnessKind::Order => {
            let SearchReport { outcome, nodes } = find_order_witness(&d, a.size, opts)?;
            let mut e = Entry::new("witness").verdict(outcome.name());
            let mut status = outcome_status(&outcome);
            if let SearchOutcome::Found(w) = &outcome {
                let ok = verify::order(&d, w);
                if !ok {
                    status = Status::Negative;
                }
                e = e
                    .json("witness", json!({ "a": strings(&w.a), "b": strings(&w.b) }))
                    .field("verified", ok);
            }
            (e, status, nodes)
        }
        WitnessKind::Coding | WitnessKind::Tuplecoding => {
            let SearchReport { outcome, nodes } = if a.kind == WitnessKind::Coding {
                find_coding_witness(&d, a.size, opts)?
            } else {
                find_tuple_coding_witness(&d, a.size, a.k, opts)?
            };
            let mut e = Entry::new("witness").verdict(outcome.name());
            let mut status = outcome_status(&outcome);
            if let SearchOutcome::Found(w) = &outcome {
                let ok = verify::coding(&d, w);
                if !ok {
                    status = Status::Negative;
                }
                let tuples = |ts: &Vec<Vec<u32>>| Value::Array(ts.iter().map(strings).collect());
                e = e
                    .json(
                        "witness",
                        json!({
                            "x": tuples(&w.x),
                            "y": tuples(&w.y),
                            "z": strings(&w.z),
                            "table": tuples(&w.table),
                        }),
                    )
                    .field("verified", ok);
            }
            (e, status, nodes)
        }
    };
    r.push(entry);
    r.raise(status);
    r.telemetry("nodes", nodes);
    r.telemetry("node_budget", opts.node_budget);
    Ok(r)
}
