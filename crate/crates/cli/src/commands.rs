use std::fs;
use std::io::Read;
use std::time::Duration;

use emcover_core::bounds::{self, SteinerValue};
use emcover_core::io::{
    digraph_to_edgelist, hypergraph_to_edgelist, read_digraph, read_hypergraph,
};
use emcover_core::solver::{
    self, CacheRecord, Problem, ProofState, ResultsCache, SearchBudget, SolveResult,
};
use emcover_core::{
    audit, audit_exhaustive, constructions, has_property_sk, Certificate, CoveringStrategy,
    Digraph, Error, Hypergraph, Result,
};
use serde_json::{json, Map, Value};

use crate::{
    Bound, BudgetArgs, CacheCmd, Cli, Command, Construct, Enumerate, Format, InputArg, Solve,
    StrategyArg, Verify,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

struct Ctx<'a> {
    cli: &'a Cli,
    out: String,
}

impl Ctx<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }

    fn json(&mut self, v: &Value) {
        self.line(v.to_string());
    }

    fn format(&self) -> Option<Format> {
        self.cli.format
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    eprintln!(
        "# args: {}",
        std::env::args().skip(1).collect::<Vec<_>>().join(" ")
    );
    let mut ctx = Ctx {
        cli,
        out: String::new(),
    };
    let code = match &cli.command {
        Command::Construct(c) => construct(&mut ctx, c)?,
        Command::Verify(v) => verify(&mut ctx, v)?,
        Command::Bound(b) => bound(&mut ctx, b)?,
        Command::Solve(s) => solve(&mut ctx, s)?,
        Command::Enumerate(e) => enumerate(&mut ctx, e)?,
        Command::Shadow(input) => {
            let h = read_hypergraph(&read_input(input)?)?;
            if h.r() < 2 {
                return Err(Error::invalid("shadow needs r >= 2"));
            }
            emit_hypergraph(&mut ctx, &h.shadow(), None);
            EXIT_OK
        }
        Command::Cache(c) => cache_cmd(&mut ctx, c)?,
    };
    match &cli.output {
        Some(path) => fs::write(path, &ctx.out)?,
        None => print!("{}", ctx.out),
    }
    Ok(code)
}

fn read_input(arg: &InputArg) -> Result<String> {
    match &arg.input {
        Some(path) => Ok(fs::read_to_string(path)?),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn with_provenance(mut v: Value, provenance: Option<Value>) -> Value {
    if let (Value::Object(map), Some(p)) = (&mut v, provenance) {
        map.insert("provenance".into(), p);
    }
    v
}

fn comment_lines(provenance: &Value) -> String {
    match provenance {
        Value::Object(map) => map.iter().map(|(k, v)| format!("# {k}: {v}\n")).collect(),
        other => format!("# {other}\n"),
    }
}

fn emit_hypergraph(ctx: &mut Ctx, h: &Hypergraph, provenance: Option<Value>) {
    match ctx.format() {
        Some(Format::Edgelist) => {
            let head = provenance.as_ref().map(comment_lines).unwrap_or_default();
            ctx.out.push_str(&head);
            ctx.out.push_str(&hypergraph_to_edgelist(h));
        }
        _ => {
            let v = with_provenance(
                serde_json::to_value(h).expect("hypergraph serializes"),
                provenance,
            );
            ctx.json(&v);
        }
    }
}

fn emit_digraph(ctx: &mut Ctx, d: &Digraph, provenance: Option<Value>) {
    match ctx.format() {
        Some(Format::Edgelist) => {
            let head = provenance.as_ref().map(comment_lines).unwrap_or_default();
            ctx.out.push_str(&head);
            ctx.out.push_str(&digraph_to_edgelist(d));
        }
        _ => {
            let v = with_provenance(
                serde_json::to_value(d).expect("digraph serializes"),
                provenance,
            );
            ctx.json(&v);
        }
    }
}

fn certificate_value(c: &Certificate) -> Value {
    match c {
        Certificate::Hypergraph(h) => serde_json::to_value(h),
        Certificate::Digraph(d) => serde_json::to_value(d),
    }
    .expect("certificate serializes")
}

fn certificate_edgelist(c: &Certificate) -> String {
    match c {
        Certificate::Hypergraph(h) => hypergraph_to_edgelist(h),
        Certificate::Digraph(d) => digraph_to_edgelist(d),
    }
}

fn open_cache(cli: &Cli) -> Result<Option<ResultsCache>> {
    let Some(path) = &cli.cache else {
        return Ok(None);
    };
    let (cache, report) = ResultsCache::load(path)?;
    for (line, why) in &report.rejected {
        eprintln!("warning: cache line {line} dropped: {why}");
    }
    Ok(Some(cache))
}

/// Cached covering number `D(m, r)` with its certificate, if any.
fn cached_covering(cli: &Cli, m: u32, r: u32) -> Result<Option<CacheRecord>> {
    Ok(open_cache(cli)?.and_then(|c| {
        c.lookup(Problem::D, &[("n", m as u64), ("r", r as u64)])
            .cloned()
    }))
}

fn construct(ctx: &mut Ctx, c: &Construct) -> Result<u8> {
    match c {
        Construct::G {
            n,
            k,
            r,
            strategy,
            c,
            inner,
        } => {
            let (n, k, r) = (*n, *k, *r);
            let m = bounds::inner_size(n, k, r);
            let mut source = format!("{strategy:?}").to_lowercase();
            let strat = match strategy {
                StrategyArg::Exact => match cached_covering(ctx.cli, m, r)? {
                    Some(rec) => {
                        eprintln!("cache hit: D({m},{r})");
                        source = "exact (cached)".into();
                        CoveringStrategy::Supplied(
                            rec.certificate.into_hypergraph().expect("D certificate"),
                        )
                    }
                    None => CoveringStrategy::Exact,
                },
                StrategyArg::Greedy => CoveringStrategy::Greedy,
                StrategyArg::Modular => CoveringStrategy::Modular(*c),
                StrategyArg::Supplied => {
                    let path = inner
                        .as_ref()
                        .ok_or_else(|| Error::invalid("--strategy supplied needs --inner FILE"))?;
                    CoveringStrategy::Supplied(read_hypergraph(&fs::read_to_string(path)?)?)
                }
            };
            let built = constructions::build_g_detailed(n, k, r, &strat)?;
            let provenance = json!({
                "construction": "g",
                "params": {"n": n, "k": k, "r": r},
                "strategy": source,
                "inner_edges": built.inner_edges,
                "patch_count": built.patch_count,
            });
            emit_hypergraph(ctx, &built.hypergraph, Some(provenance));
        }
        Construct::Em { n, k } => {
            let h = constructions::em_graph(*n, *k)?;
            emit_hypergraph(
                ctx,
                &h,
                Some(json!({"construction": "em", "params": {"n": n, "k": k}})),
            );
        }
        Construct::Modular { n, r, c } => {
            let c = c.unwrap_or(*n);
            let (h, patches) = constructions::modular_covering(*n, *r, c)?;
            let provenance = json!({
                "construction": "modular",
                "params": {"n": n, "r": r, "c": c},
                "patch_count": patches,
            });
            emit_hypergraph(ctx, &h, Some(provenance));
        }
        Construct::Greedy { n, r } => {
            let h = constructions::greedy_covering(*n, *r)?;
            emit_hypergraph(
                ctx,
                &h,
                Some(json!({"construction": "greedy", "params": {"n": n, "r": r}})),
            );
        }
        Construct::DigraphA { n, k } => {
            let d = constructions::build_a(*n, *k, None)?;
            emit_digraph(
                ctx,
                &d,
                Some(json!({"construction": "digraph-a", "params": {"n": n, "k": k}})),
            );
        }
    }
    Ok(EXIT_OK)
}

fn verdict(ctx: &mut Ctx, ok: bool, text: String, report: Value) -> u8 {
    match ctx.format() {
        Some(Format::Json) => ctx.json(&report),
        _ => ctx.line(text),
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn verify(ctx: &mut Ctx, v: &Verify) -> Result<u8> {
    match v {
        Verify::Cover {
            k,
            s,
            exhaustive,
            input,
        } => {
            let h = read_hypergraph(&read_input(input)?)?;
            let report = if *exhaustive {
                audit_exhaustive(&h, *k, *s)?
            } else {
                audit(&h, *k, *s)?
            };
            let text = if report.covered {
                format!(
                    "covered, multiplicity_min={}",
                    report.multiplicity_min.unwrap_or(0)
                )
            } else {
                format!(
                    "uncovered, witness={:?}",
                    report.witness.clone().unwrap_or_default()
                )
            };
            let value = serde_json::to_value(&report)?;
            Ok(verdict(ctx, report.covered, text, value))
        }
        Verify::Sk { k, input } => {
            let d = read_digraph(&read_input(input)?)?;
            let report = has_property_sk(&d, *k)?;
            let text = if report.holds {
                format!("S_{k} holds")
            } else {
                format!(
                    "S_{k} fails, witness={:?}",
                    report.witness.clone().unwrap_or_default()
                )
            };
            let value = serde_json::to_value(&report)?;
            Ok(verdict(ctx, report.holds, text, value))
        }
        Verify::ShadowComplete { input } => {
            let h = read_hypergraph(&read_input(input)?)?;
            if h.r() < 2 {
                return Err(Error::invalid("shadow needs r >= 2"));
            }
            let ok = h.is_shadow_complete();
            let missing = (
                h.shadow().len() as u128,
                emcover_core::setsys::binomial(h.n() as u64, h.r() as u64 - 1),
            );
            let text = if ok {
                "shadow complete".to_string()
            } else {
                format!(
                    "shadow incomplete ({} of {} sets)",
                    missing.0,
                    missing.1.unwrap_or(0)
                )
            };
            Ok(verdict(
                ctx,
                ok,
                text,
                json!({"shadow_complete": ok, "shadow_size": missing.0}),
            ))
        }
        Verify::MemberG { k, d_inner, input } => {
            let h = read_hypergraph(&read_input(input)?)?;
            let d = match d_inner {
                Some(d) => Some(*d),
                None if h.r() >= 2 && *k + 1 >= h.r() && h.n() > *k => {
                    let m = bounds::inner_size(h.n(), *k, h.r());
                    cached_covering(ctx.cli, m, h.r())?.map(|rec| rec.optimum)
                }
                None => None,
            };
            let ok = solver::is_member_g(&h, *k, d, &SearchBudget::default())?;
            let text = if ok { "member" } else { "not a member" }.to_string();
            Ok(verdict(ctx, ok, text, json!({"member": ok})))
        }
        Verify::MemberA { k, input } => {
            let d = read_digraph(&read_input(input)?)?;
            let ok = solver::is_member_a(&d, *k);
            let text = if ok { "member" } else { "not a member" }.to_string();
            Ok(verdict(ctx, ok, text, json!({"member": ok})))
        }
    }
}

fn bound(ctx: &mut Ctx, b: &Bound) -> Result<u8> {
    let (tag, params, value): (&str, Value, Value) = match b {
        Bound::Em { n, k } => (
            "erdos-moser",
            json!({"n": n, "k": k}),
            json!(bounds::erdos_moser_f(*n, *k)? as u64),
        ),
        Bound::G { n, k, r, d_inner } => {
            let d = match d_inner {
                Some(d) => *d,
                None => {
                    let m = bounds::inner_size(*n, *k, *r);
                    match cached_covering(ctx.cli, m, *r)? {
                        Some(rec) => rec.optimum,
                        None => {
                            let res = solver::solve_d(m, *r, &SearchBudget::default())?;
                            if res.proof_state != ProofState::Optimal {
                                return Err(Error::CoveringNumberUnavailable {
                                    n: m,
                                    r: *r,
                                    reason: "search budget exhausted".into(),
                                });
                            }
                            res.optimum
                        }
                    }
                }
            };
            let g = bounds::g_value(*n, *k, *r, d as u128)?;
            (
                "construction-size",
                json!({"n": n, "k": k, "r": r, "d_inner": d}),
                json!(g as u64),
            )
        }
        Bound::GSteiner { n, k, r } => {
            let v = match bounds::g_steiner(*n, *k, *r)? {
                SteinerValue::Candidate(g) => json!(g as u64),
                SteinerValue::NotIntegral => Value::Null,
            };
            ("steiner-case", json!({"n": n, "k": k, "r": r}), v)
        }
        Bound::CoveringLb { n, r } => (
            "trivial-covering",
            json!({"n": n, "r": r}),
            json!(bounds::covering_lb(*n, *r)? as u64),
        ),
        Bound::Kk { m, r } => {
            let x = bounds::lovasz_x(*m, *r)?;
            let lb = bounds::kk_shadow_lb(*m, *r)?;
            (
                "kruskal-katona-lovasz",
                json!({"m": m, "r": r, "x": x.x}),
                json!(lb),
            )
        }
    };
    match ctx.format() {
        Some(Format::Json) => ctx.json(&json!({"bound": tag, "params": params, "value": value})),
        _ => {
            let shown = match &value {
                Value::Null => "not-integral".to_string(),
                v => v.to_string(),
            };
            ctx.line(format!("{tag} {shown}"));
        }
    }
    Ok(EXIT_OK)
}

fn budget(args: &BudgetArgs) -> Result<SearchBudget> {
    let mut b = SearchBudget::default().with_workers(args.workers);
    b.allow_large = args.allow_large;
    if let Some(nodes) = args.max_nodes {
        b = b.with_max_nodes(nodes);
    }
    if let Some(secs) = args.time_limit {
        let limit = Duration::try_from_secs_f64(secs)
            .map_err(|_| Error::invalid(format!("bad time limit {secs}")))?;
        b = b.with_time_limit(limit);
    }
    Ok(b)
}

/// What a solve prints; built identically from a fresh result or a cache record.
struct Solved {
    problem: Problem,
    params: Vec<(&'static str, u64)>,
    optimum: Option<u64>,
    proof_state: ProofState,
    certificate: Option<Certificate>,
}

fn emit_solved(ctx: &mut Ctx, s: &Solved) {
    let optimum = s.optimum.map_or("none".to_string(), |o| o.to_string());
    let state = serde_json::to_value(s.proof_state).expect("state serializes");
    let state = state.as_str().unwrap_or_default().to_string();
    match ctx.format() {
        Some(Format::Json) => {
            let params: Map<String, Value> = s
                .params
                .iter()
                .map(|&(k, v)| (k.to_string(), json!(v)))
                .collect();
            ctx.json(&json!({
                "problem": s.problem,
                "params": params,
                "optimum": s.optimum,
                "proof_state": state,
                "certificate": s.certificate.as_ref().map(certificate_value),
            }));
        }
        Some(Format::Edgelist) => {
            ctx.line(format!("# optimum {optimum}"));
            ctx.line(format!("# proof_state {state}"));
            if let Some(c) = &s.certificate {
                ctx.out.push_str(&certificate_edgelist(c));
            }
        }
        None => {
            ctx.line(format!("optimum {optimum}"));
            ctx.line(format!("proof_state {state}"));
            if let Some(c) = &s.certificate {
                ctx.line(format!("certificate {}", certificate_value(c)));
            }
        }
    }
}

fn report_stats(res: &SolveResult) {
    eprintln!(
        "nodes={} wall={:.3}s lower_bound={}",
        res.nodes_explored,
        res.wall_time.as_secs_f64(),
        res.lower_bound
    );
}

fn solve(ctx: &mut Ctx, s: &Solve) -> Result<u8> {
    let (problem, params): (Problem, Vec<(&'static str, u64)>) = match s {
        Solve::D { n, r, .. } => (Problem::D, vec![("n", *n as u64), ("r", *r as u64)]),
        Solve::F { n, k, r, s, .. } => (
            Problem::F,
            vec![
                ("n", *n as u64),
                ("k", *k as u64),
                ("r", *r as u64),
                ("s", *s as u64),
            ],
        ),
        Solve::Digraph { n, k, .. } => (Problem::Digraph, vec![("n", *n as u64), ("k", *k as u64)]),
        Solve::OrientedF { k, .. } => (Problem::Oriented, vec![("k", *k as u64)]),
    };
    let mut cache = open_cache(ctx.cli)?;
    if let Some(rec) = cache.as_ref().and_then(|c| c.lookup(problem, &params)) {
        eprintln!("cache hit");
        let solved = Solved {
            problem,
            params,
            optimum: Some(rec.optimum),
            proof_state: ProofState::Optimal,
            certificate: Some(rec.certificate.clone()),
        };
        emit_solved(ctx, &solved);
        return Ok(EXIT_OK);
    }
    if cache.is_some() {
        eprintln!("cache miss");
    }
    let solved = match s {
        Solve::OrientedF {
            k,
            n_max,
            budget: b,
        } => {
            let res = solver::solve_oriented_min_vertices(*k, *n_max, &budget(b)?)?;
            eprintln!(
                "nodes={} wall={:.3}s searched_up_to={}",
                res.nodes_explored,
                res.wall_time.as_secs_f64(),
                res.searched_up_to
            );
            if res.min_vertices.is_none() {
                eprintln!(
                    "no oriented S_{k} graph on at most {} vertices",
                    res.searched_up_to
                );
            }
            Solved {
                problem,
                params,
                optimum: res.min_vertices.map(u64::from),
                proof_state: res.proof_state,
                certificate: res.certificate.map(Certificate::Digraph),
            }
        }
        _ => {
            let res = match s {
                Solve::D { n, r, budget: b } => solver::solve_d(*n, *r, &budget(b)?)?,
                Solve::F {
                    n,
                    k,
                    r,
                    s,
                    budget: b,
                } => solver::solve_f(*n, *k, *r, *s, &budget(b)?)?,
                Solve::Digraph { n, k, budget: b } => {
                    solver::solve_digraph_min(*n, *k, &budget(b)?)?
                }
                Solve::OrientedF { .. } => unreachable!(),
            };
            report_stats(&res);
            if let Solve::F { n, k, r, s: 1, .. } = s {
                if res.proof_state == ProofState::Optimal {
                    compare_with_construction(*n, *k, *r, res.optimum);
                }
            }
            Solved {
                problem,
                params,
                optimum: Some(res.optimum),
                proof_state: res.proof_state,
                certificate: Some(res.certificate),
            }
        }
    };
    if let (Some(cache), ProofState::Optimal, Some(optimum), Some(cert)) = (
        cache.as_mut(),
        solved.proof_state,
        solved.optimum,
        &solved.certificate,
    ) {
        cache.insert(CacheRecord {
            problem,
            params: solved
                .params
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
            optimum,
            certificate: cert.clone(),
            solver_version: solver::SOLVER_VERSION.to_string(),
        })?;
        cache.save()?;
        eprintln!("cache stored");
    }
    emit_solved(ctx, &solved);
    Ok(match solved.proof_state {
        ProofState::Optimal => EXIT_OK,
        ProofState::BudgetExhausted => EXIT_BUDGET,
    })
}

/// Diagnostic only: does the optimum match the hub construction size?
fn compare_with_construction(n: u32, k: u32, r: u32, optimum: u64) {
    let m = bounds::inner_size(n, k, r);
    let d = solver::solve_d(m, r, &SearchBudget::default().with_max_nodes(1_000_000))
        .ok()
        .filter(|d| d.proof_state == ProofState::Optimal)
        .map(|d| d.optimum);
    match d.map(|d| bounds::g_value(n, k, r, d as u128)) {
        Some(Ok(g)) => eprintln!(
            "construction size {g}; equal to optimum: {}",
            g == optimum as u128
        ),
        _ => eprintln!("construction size unknown (inner covering number not proven)"),
    }
}

fn enumerate(ctx: &mut Ctx, e: &Enumerate) -> Result<u8> {
    let res = match e {
        Enumerate::F {
            n,
            k,
            r,
            s,
            budget: b,
        } => solver::enumerate_extremal(*n, *k, *r, *s, &budget(b)?)?,
        Enumerate::Digraph { n, k, budget: b } => {
            solver::enumerate_digraph_optima(*n, *k, &budget(b)?)?
        }
    };
    report_stats(&res);
    if res.proof_state != ProofState::Optimal {
        eprintln!("budget exhausted before every optimum was found");
        return Ok(EXIT_BUDGET);
    }
    let classes = res.all_optima.unwrap_or_default();
    let certs: Vec<Certificate> = classes
        .iter()
        .map(|c| match (c.to_hypergraph(), c.to_digraph()) {
            (Some(h), _) => Certificate::Hypergraph(h),
            (None, Some(d)) => Certificate::Digraph(d),
            (None, None) => unreachable!("canonical form is one of the two kinds"),
        })
        .collect();
    match ctx.format() {
        Some(Format::Json) => ctx.json(&json!({
            "optimum": res.optimum,
            "classes": certs.iter().map(certificate_value).collect::<Vec<_>>(),
        })),
        Some(Format::Edgelist) => {
            ctx.line(format!("# optimum {}", res.optimum));
            ctx.line(format!("# classes {}", certs.len()));
            for (i, c) in certs.iter().enumerate() {
                ctx.line(format!("# class {}", i + 1));
                ctx.out.push_str(&certificate_edgelist(c));
            }
        }
        None => {
            ctx.line(format!("optimum {}", res.optimum));
            ctx.line(format!("classes {}", certs.len()));
            for c in &certs {
                ctx.line(certificate_value(c).to_string());
            }
        }
    }
    Ok(EXIT_OK)
}

fn cache_cmd(ctx: &mut Ctx, c: &CacheCmd) -> Result<u8> {
    let path = ctx
        .cli
        .cache
        .clone()
        .ok_or_else(|| Error::invalid("no cache: pass --cache PATH or set EMCOVER_CACHE"))?;
    let (mut cache, report) = ResultsCache::load(&path)?;
    match c {
        CacheCmd::Show => {
            for rec in cache.records() {
                match ctx.format() {
                    Some(Format::Json) => ctx.json(&serde_json::to_value(rec)?),
                    _ => {
                        let params: Vec<String> =
                            rec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        ctx.line(format!(
                            "{} {} optimum {} ({})",
                            rec.problem,
                            params.join(" "),
                            rec.optimum,
                            rec.solver_version
                        ));
                    }
                }
            }
            Ok(EXIT_OK)
        }
        CacheCmd::Verify => {
            for (line, why) in &report.rejected {
                ctx.line(format!("line {line}: {why}"));
            }
            ctx.line(format!(
                "{} verified, {} rejected",
                report.loaded,
                report.rejected.len()
            ));
            Ok(if report.rejected.is_empty() {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
        CacheCmd::Gc => {
            let stale = cache.gc();
            cache.save()?;
            ctx.line(format!(
                "removed {stale} stale and {} unreadable records, {} kept",
                report.rejected.len(),
                cache.len()
            ));
            Ok(EXIT_OK)
        }
    }
}
