use std::fmt::Write as _;

use anyhow::{bail, Context};
use qaseries::composed::{composed_report, composed_scanner};
use qaseries::forms::{binomial_identities, DEFAULT_ALTERNATIVE_CAP};
use qaseries::series::{SeriesLabel, SeriesSigns};
use qaseries::store::{load, run_with_checkpoints, write_events_csv};
use qaseries::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{select, Command, RunConfig, DEFAULT_CHECKPOINT_EVERY};

/// A command's result in every output format.
pub struct Rendered {
    pub result: Value,
    pub text: String,
    pub csv: Vec<u8>,
    /// A zero witness was found; maps to exit code 2.
    pub zero_found: bool,
}

fn csv_rows<R: Serialize>(
    header: &[&str],
    rows: impl IntoIterator<Item = R>,
) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner()?)
}

fn label(series: &SeriesLabel) -> String {
    match series {
        SeriesLabel::Plain { id, signs } => format!("{signs} (#{id})"),
        SeriesLabel::Composed { schedule } => format!("composed {}", schedule.cycle.join("|")),
    }
}

pub fn run(cfg: &RunConfig, sieve: SieveConfig) -> anyhow::Result<Rendered> {
    let command = cfg
        .command
        .context("no command given (pass one or set `command` in --config)")?;
    match command {
        Command::Primes => primes(cfg, sieve),
        Command::Forms => forms(cfg),
        Command::Negate => negate(cfg),
        Command::Terms => terms(cfg, sieve),
        Command::Alternatives => alternatives(cfg),
        Command::Scan | Command::Zeros | Command::Crossings | Command::Census => {
            scan_like(command, cfg, sieve)
        }
        Command::Table2 => table2(cfg),
        Command::Infscan => infscan(cfg, sieve),
        Command::Classify => classify_cmd(cfg, sieve),
        Command::Candidates => candidates(cfg, sieve),
        Command::Extend => extend_cmd(cfg),
        Command::Identities => identities(cfg),
        Command::Resume => resume(cfg),
    }
}

fn primes(cfg: &RunConfig, sieve: SieveConfig) -> anyhow::Result<Rendered> {
    let limit = cfg.prime_bound.context("--prime-bound is required")?;
    let list = primes_upto(limit, &sieve)?;
    Ok(Rendered {
        result: json!({ "limit": limit, "count": list.len(), "primes": list }),
        text: format!("{} primes <= {limit}\n{}\n", list.len(), join(&list)),
        csv: csv_rows(&["prime"], list.iter().map(|p| (p,)))?,
        zero_found: false,
    })
}

fn negate(cfg: &RunConfig) -> anyhow::Result<Rendered> {
    let e = cfg.modulus()?;
    let a = select(e, cfg.alt.as_deref())?;
    let n = a.negate();
    let pair = [&a, &n];
    Ok(Rendered {
        result: json!(pair
            .iter()
            .map(|x| json!({ "id": x.id().to_string(), "signs": x.sign_string() }))
            .collect::<Vec<_>>()),
        text: format!(
            "#{} {}  ->  #{} {}\n",
            a.id(),
            a.sign_string(),
            n.id(),
            n.sign_string()
        ),
        csv: csv_rows(
            &["id", "signs"],
            pair.iter().map(|x| (x.id().to_string(), x.sign_string())),
        )?,
        zero_found: false,
    })
}

/// Individual signed terms, of a plain series or, when any schedule option
/// is given, of a composed one.
fn terms(cfg: &RunConfig, sieve: SieveConfig) -> anyhow::Result<Rendered> {
    let e = cfg.modulus()?;
    let bounds = cfg.bounds();
    let composed =
        cfg.cycle.is_some() || cfg.mode.is_some() || cfg.lengths.is_some() || cfg.window.is_some();
    let list: Vec<SeriesTerm> = if composed {
        compose(&schedule(cfg, e)?, &bounds)?
    } else {
        let mut sc = Scanner::new(
            SeriesSigns::Plain(select(e, cfg.alt.as_deref())?),
            ScanOptions::default(),
            sieve,
        )?;
        let mut out = Vec::new();
        sc.run_with(&bounds, |t| out.push(*t))?;
        out
    };
    let mut text = format!(
        "{:>8} {:>12} {:>8} {:>14}\n",
        "n", "prime", "residue", "term"
    );
    let mut sum = 0i128;
    let mut zero_found = false;
    for t in &list {
        sum += t.value;
        zero_found |= sum == 0;
        writeln!(
            text,
            "{:>8} {:>12} {:>8} {:>14}",
            t.index, t.prime, t.residue, t.value
        )?;
    }
    Ok(Rendered {
        result: json!({ "modulus": e, "terms": list }),
        text,
        csv: csv_rows(
            &["n", "prime", "residue", "term"],
            list.iter()
                .map(|t| (t.index, t.prime, t.residue, t.value.to_string())),
        )?,
        zero_found,
    })
}

fn forms(cfg: &RunConfig) -> anyhow::Result<Rendered> {
    let e = cfg.modulus()?;
    let form = enumerate_forms(e)?;
    let mut text = format!("e = {e}: {} admissible residues\n", form.len());
    for o in form.residues() {
        writeln!(text, "  {e}n + {o}")?;
    }
    Ok(Rendered {
        result: json!({ "modulus": e, "residues": form.residues() }),
        text,
        csv: csv_rows(
            &["modulus", "residue"],
            form.residues().iter().map(|o| (e, o)),
        )?,
        zero_found: false,
    })
}

fn alternatives(cfg: &RunConfig) -> anyhow::Result<Rendered> {
    let e = cfg.modulus()?;
    let cap = cfg.cap.unwrap_or(DEFAULT_ALTERNATIVE_CAP);
    let form = enumerate_forms(e)?;
    let count = count_alternatives(e)?;
    let list = match enumerate_alternatives(e, cap) {
        Ok(list) => list,
        Err(Error::TooManyAlternatives { .. }) => {
            return Ok(Rendered {
                result: json!({ "modulus": e, "count": count.to_string(), "listed": false, "cap": cap }),
                text: format!(
                    "e = {e}: {count} alternatives, above the cap of {cap}; not listed\n"
                ),
                csv: csv_rows(&["modulus", "count"], [(e, count.to_string())])?,
                zero_found: false,
            });
        }
        Err(err) => return Err(err.into()),
    };
    let mut text = format!("e = {e}: {count} alternatives\n");
    let width = list.len().to_string().len().max(2);
    write!(text, "{:>5} ", "o")?;
    for a in &list {
        write!(text, " {:>width$}", a.id())?;
    }
    text.push('\n');
    for (i, o) in form.residues().iter().enumerate() {
        write!(text, "{:>5} ", o)?;
        for a in &list {
            write!(text, " {:>width$}", a.signs()[i].as_char())?;
        }
        text.push('\n');
    }
    let rows: Vec<(String, String)> = list
        .iter()
        .map(|a| (a.id().to_string(), a.sign_string()))
        .collect();
    Ok(Rendered {
        result: json!({
            "modulus": e,
            "residues": form.residues(),
            "count": count.to_string(),
            "listed": true,
            "alternatives": rows.iter().map(|(id, s)| json!({ "id": id, "signs": s })).collect::<Vec<_>>(),
        }),
        text,
        csv: csv_rows(&["id", "signs"], rows)?,
        zero_found: false,
    })
}

/// Build or resume a scanner and run it, checkpointing when asked.
fn drive(
    signs: SeriesSigns,
    cfg: &RunConfig,
    sieve: SieveConfig,
) -> anyhow::Result<(Scanner, Bounds)> {
    let bounds = cfg.bounds();
    let options = ScanOptions {
        record_crossings: true,
        dump_prefix: cfg.dump_prefix,
    };
    let mut sc = match &cfg.checkpoint {
        Some(path) if path.exists() => {
            let sc = load(path)?.into_scanner()?;
            if sc.signs().label() != signs.label() {
                bail!(
                    "checkpoint {} holds a different series ({}); remove it or pick another path",
                    path.display(),
                    label(&sc.signs().label())
                );
            }
            sc
        }
        _ => Scanner::new(signs, options, sieve)?,
    };
    match &cfg.checkpoint {
        Some(path) => run_with_checkpoints(
            &mut sc,
            &bounds,
            path,
            cfg.checkpoint_every.unwrap_or(DEFAULT_CHECKPOINT_EVERY),
        )?,
        None => sc.run(&bounds)?,
    }
    Ok((sc, bounds))
}

fn scan_summary(rep: &ScanReport, restart: bool) -> String {
    let mut s = format!(
        "e = {}, series {}\nterms {}, last prime {}, S_n = {}\nzeros {}, crossings {}\n",
        rep.modulus,
        label(&rep.series),
        rep.terms,
        rep.last_prime.map_or("-".into(), |p| p.to_string()),
        rep.final_sum,
        rep.zeros.len(),
        rep.crossing_count,
    );
    for z in &rep.zeros {
        let _ = writeln!(s, "  zero at n = {} (p = {})", z.n, z.prime);
    }
    if let Some(b) = rep.beta_candidate {
        let _ = match b.last_crossing {
            Some(j) => writeln!(s, "last crossing at j = {j}, {} terms since", b.drought),
            None => writeln!(s, "no crossing in {} terms", b.drought),
        };
    }
    if restart {
        let _ = writeln!(s, "restart segments: {}", join(&rep.restart_segments()));
    }
    s
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn scan_json(rep: &ScanReport, restart: bool) -> anyhow::Result<Value> {
    let mut v = serde_json::to_value(rep)?;
    if restart {
        v["restart_segments"] = json!(rep.restart_segments());
    }
    Ok(v)
}

fn events_csv(rep: &ScanReport) -> anyhow::Result<Vec<u8>> {
    let mut out = Vec::new();
    write_events_csv(rep, &mut out)?;
    Ok(out)
}

fn scan_like(command: Command, cfg: &RunConfig, sieve: SieveConfig) -> anyhow::Result<Rendered> {
    let e = cfg.modulus()?;
    let a = select(e, cfg.alt.as_deref())?;
    let (sc, bounds) = drive(SeriesSigns::Plain(a), cfg, sieve)?;
    let rep = sc.report(&bounds);
    let zero_found = !rep.zeros.is_empty();
    let rendered = match command {
        Command::Zeros => Rendered {
            result: json!({
                "modulus": e,
                "series": rep.series,
                "terms": rep.terms,
                "last_prime": rep.last_prime,
                "zeros": rep.zeros,
                "restart_segments": cfg.restart.then(|| rep.restart_segments()),
            }),
            text: {
                let mut t = format!(
                    "e = {e}, series {}, {} terms\n",
                    label(&rep.series),
                    rep.terms
                );
                for z in &rep.zeros {
                    writeln!(t, "n = {}  p = {}", z.n, z.prime)?;
                }
                if rep.zeros.is_empty() {
                    t.push_str("no zeros\n");
                }
                if cfg.restart {
                    writeln!(t, "restart segments: {}", join(&rep.restart_segments()))?;
                }
                t
            },
            csv: csv_rows(&["n", "prime"], rep.zeros.iter().map(|z| (z.n, z.prime)))?,
            zero_found,
        },
        Command::Crossings => Rendered {
            result: json!({
                "modulus": e,
                "series": rep.series,
                "terms": rep.terms,
                "crossing_count": rep.crossing_count,
                "crossings": rep.crossings,
                "beta_candidate": rep.beta_candidate,
            }),
            text: {
                let mut t = format!(
                    "e = {e}, series {}, {} terms, {} crossings\n",
                    label(&rep.series),
                    rep.terms,
                    rep.crossing_count
                );
                for c in &rep.crossings {
                    writeln!(t, "S_{} = {}  S_{} = {}", c.j, c.s_j, c.j + 1, c.s_next)?;
                }
                t
            },
            csv: csv_rows(
                &["j", "s_j", "s_next", "prime"],
                rep.crossings
                    .iter()
                    .map(|c| (c.j, c.s_j.to_string(), c.s_next.to_string(), c.prime)),
            )?,
            zero_found,
        },
        Command::Census => Rendered {
            result: json!({
                "modulus": e,
                "bounds": bounds,
                "terms": rep.terms,
                "last_prime": rep.last_prime,
                "census": rep.census,
            }),
            text: {
                let mut t = format!("e = {e}, {} primes ({bounds})\n", rep.terms);
                for (o, n) in &rep.census {
                    writeln!(t, "{o}: {n}")?;
                }
                t
            },
            csv: csv_rows(&["residue", "count"], rep.census.iter())?,
            zero_found: false,
        },
        _ => Rendered {
            result: scan_json(&rep, cfg.restart)?,
            text: scan_summary(&rep, cfg.restart),
            csv: events_csv(&rep)?,
            zero_found,
        },
    };
    Ok(rendered)
}

fn table2(cfg: &RunConfig) -> anyhow::Result<Rendered> {
    let e = cfg.modulus()?;
    let a = select(e, cfg.alt.as_deref())?;
    let at = cfg
        .at
        .as_deref()
        .context("--at is required, e.g. --at 4,12,196")?;
    let rows = table2_relations(&a, at, cfg.explicit_bounds().as_ref())?;
    let mut text = format!(
        "e = {e}, series {}\n{:>8} {:>12} {:>12} {:>12}\n",
        a.sign_string(),
        "n",
        "m_(n-1)",
        "m_n",
        "S_(n-1)"
    );
    for r in &rows {
        writeln!(
            text,
            "{:>8} {:>12} {:>12} {:>12}",
            r.n, r.previous_term, r.term, r.previous_sum
        )?;
    }
    Ok(Rendered {
        result: json!({ "modulus": e, "signs": a.sign_string(), "rows": rows }),
        text,
        csv: csv_rows(
            &["n", "previous_term", "term", "previous_sum"],
            rows.iter().map(|r| {
                (
                    r.n,
                    r.previous_term.to_string(),
                    r.term.to_string(),
                    r.previous_sum.to_string(),
                )
            }),
        )?,
        zero_found: false,
    })
}

fn schedule(cfg: &RunConfig, e: u64) -> anyhow::Result<BlockSchedule> {
    let mode = cfg.schedule_mode()?;
    Ok(match &cfg.cycle {
        Some(entries) => {
            let cycle = entries
                .iter()
                .map(|s| select(e, Some(s)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            BlockSchedule::new(mode, cycle)?
        }
        None => BlockSchedule::flip_pair(mode, select(e, cfg.alt.as_deref())?)?,
    })
}

fn infscan(cfg: &RunConfig, sieve: SieveConfig) -> anyhow::Result<Rendered> {
    let e = cfg.modulus()?;
    let schedule = schedule(cfg, e)?;
    let probe = composed_scanner(&schedule, ScanOptions::default(), sieve)?;
    let (sc, bounds) = drive(probe.signs().clone(), cfg, sieve)?;
    let rep = composed_report(&sc, &bounds);
    let mut text = scan_summary(&rep.scan, cfg.restart);
    writeln!(
        text,
        "blocks {}, boundaries {}",
        rep.boundaries.len(),
        join(&rep.boundaries)
    )?;
    let mut result = serde_json::to_value(&rep)?;
    if cfg.restart {
        result["restart_segments"] = json!(rep.scan.restart_segments());
    }
    Ok(Rendered {
        result,
        text,
        csv: events_csv(&rep.scan)?,
        zero_found: !rep.scan.zeros.is_empty(),
    })
}

fn outcome_text(o: &Outcome) -> String {
    match o {
        Outcome::ZeroFound { n, prime } => format!("zero at n = {n} (p = {prime})"),
        Outcome::NoZeroUpToLimit {
            terms,
            crossing_count,
            ..
        } => {
            format!("no zero in {terms} terms ({crossing_count} crossings)")
        }
    }
}

fn classify_cmd(cfg: &RunConfig, sieve: SieveConfig) -> anyhow::Result<Rendered> {
    let e = cfg.modulus()?;
    let mut cc = ClassifyConfig::new(cfg.bounds());
    cc.plan = cfg.plan_for(e)?;
    cc.cap = cfg.cap.unwrap_or(DEFAULT_ALTERNATIVE_CAP);
    cc.verify_symmetry = cfg.verify_symmetry;
    cc.sieve = sieve;
    let v = classify(e, &cc)?;
    let mut text = format!(
        "e = {e}, {} alternatives{}, limits {}\n",
        v.alternatives_total,
        if v.sampled { " (sampled)" } else { "" },
        v.limits
    );
    for o in &v.outcomes {
        writeln!(
            text,
            "  #{} {}: {}{}",
            o.id,
            o.signs,
            outcome_text(&o.outcome),
            if o.by_symmetry { " [by symmetry]" } else { "" }
        )?;
    }
    if let Some(c) = &v.composed {
        writeln!(
            text,
            "  composed ({} blocks): {}",
            c.blocks,
            outcome_text(&c.outcome)
        )?;
    }
    writeln!(text, "aggregate: {:?}", v.aggregate)?;
    for f in &v.failures {
        writeln!(text, "failure: {f}")?;
    }
    let zero_found = v.outcomes.iter().any(|o| o.outcome.zero().is_some())
        || v.composed
            .as_ref()
            .is_some_and(|c| c.outcome.zero().is_some());
    let rows = v.outcomes.iter().map(|o| {
        let z = o.outcome.zero();
        (
            o.id.to_string(),
            o.signs.clone(),
            z.map(|z| z.n),
            z.map(|z| z.prime),
            o.by_symmetry,
        )
    });
    Ok(Rendered {
        csv: csv_rows(
            &["id", "signs", "zero_n", "zero_prime", "by_symmetry"],
            rows,
        )?,
        result: serde_json::to_value(&v)?,
        text,
        zero_found,
    })
}

fn candidate_text(r: &CandidateReport) -> String {
    let mut t = format!("range {}..={}, limits {}\n", r.from, r.to, r.limits);
    let _ = writeln!(t, "candidates: {}", join(&r.moduli()));
    for x in &r.excluded {
        let _ = writeln!(
            t,
            "  {} excluded: zero at n = {} (p = {})",
            x.modulus, x.witness.n, x.witness.prime
        );
    }
    let _ = writeln!(t, "note: {}", r.disclaimer);
    t
}

/// modulus, status, zero index, zero prime, terms scanned
type CandidateRow<'a> = (u64, &'a str, Option<u64>, Option<u64>, Option<u64>);

fn candidate_csv(r: &CandidateReport) -> anyhow::Result<Vec<u8>> {
    let mut rows: Vec<CandidateRow> = r
        .members
        .iter()
        .map(|m| (m.modulus, "candidate", None, None, Some(m.terms)))
        .collect();
    rows.extend(r.excluded.iter().map(|x| {
        (
            x.modulus,
            "excluded",
            Some(x.witness.n),
            Some(x.witness.prime),
            None,
        )
    }));
    rows.sort_by_key(|r| r.0);
    csv_rows(
        &["modulus", "status", "zero_n", "zero_prime", "terms"],
        rows,
    )
}

fn candidates(cfg: &RunConfig, sieve: SieveConfig) -> anyhow::Result<Rendered> {
    let from = cfg.from.context("--from is required")?;
    let to = cfg.to.context("--to is required")?;
    let r = candidate_set(from, to, &cfg.bounds(), &cfg.plan()?, sieve)?;
    Ok(Rendered {
        text: candidate_text(&r),
        csv: candidate_csv(&r)?,
        result: serde_json::to_value(&r)?,
        zero_found: false,
    })
}

fn extend_cmd(cfg: &RunConfig) -> anyhow::Result<Rendered> {
    let path = cfg
        .input
        .as_ref()
        .context("--input is required (a candidates report in JSON)")?;
    let raw: Value = serde_json::from_slice(
        &std::fs::read(path).with_context(|| format!("reading {}", path.display()))?,
    )?;
    // accept the full output document or a bare report
    let body = raw.get("result").cloned().unwrap_or(raw);
    let old: CandidateReport = serde_json::from_value(body).context("not a candidates report")?;
    let deeper = cfg
        .explicit_bounds()
        .context("extend needs --terms and/or --prime-bound")?;
    let r = extend(&old, &deeper)?;
    Ok(Rendered {
        text: candidate_text(&r),
        csv: candidate_csv(&r)?,
        result: serde_json::to_value(&r)?,
        zero_found: false,
    })
}

fn identities(cfg: &RunConfig) -> anyhow::Result<Rendered> {
    let a_max = cfg.amax.unwrap_or(5);
    let rows = identity_report(a_max, cfg.cap.unwrap_or(DEFAULT_ALTERNATIVE_CAP))?;
    let binomial = binomial_identities(16);
    let mut text = format!(
        "{:>3} {:>6} {:>6} {:>6} {:>24} {:>10}  ok\n",
        "a", "e", "forms", "half", "max j", "2^half"
    );
    for r in &rows {
        writeln!(
            text,
            "{:>3} {:>6} {:>6} {:>6} {:>24} {:>10}  {}",
            r.a,
            r.modulus,
            r.forms,
            r.half,
            r.max_j,
            r.base_sum,
            if r.passed() { "yes" } else { "NO" }
        )?;
    }
    let failed: Vec<u64> = binomial
        .iter()
        .filter(|b| !b.passed())
        .map(|b| b.n)
        .collect();
    writeln!(
        text,
        "sum C(n,k)^2 = C(2n,n) and sum C(n,k) = 2^n for n <= 16: {}",
        if failed.is_empty() {
            "ok".to_string()
        } else {
            format!("fails at {failed:?}")
        }
    )?;
    Ok(Rendered {
        result: json!({ "rows": rows, "binomial": binomial }),
        text,
        csv: csv_rows(
            &[
                "a", "modulus", "forms", "half", "max_j", "base_sum", "passed",
            ],
            rows.iter().map(|r| {
                (
                    r.a,
                    r.modulus,
                    r.forms,
                    r.half,
                    r.max_j.to_string(),
                    r.base_sum.to_string(),
                    r.passed(),
                )
            }),
        )?,
        zero_found: false,
    })
}

fn resume(cfg: &RunConfig) -> anyhow::Result<Rendered> {
    let path = cfg
        .checkpoint
        .as_ref()
        .context("resume needs --checkpoint")?;
    let cp = load(path)?;
    let saved = cp.bounds;
    let mut sc = cp.into_scanner()?;
    let bounds = cfg.explicit_bounds().unwrap_or(saved);
    run_with_checkpoints(
        &mut sc,
        &bounds,
        path,
        cfg.checkpoint_every.unwrap_or(DEFAULT_CHECKPOINT_EVERY),
    )?;
    let rep = sc.report(&bounds);
    Ok(Rendered {
        result: scan_json(&rep, cfg.restart)?,
        text: scan_summary(&rep, cfg.restart),
        csv: events_csv(&rep)?,
        zero_found: !rep.zeros.is_empty(),
    })
}
