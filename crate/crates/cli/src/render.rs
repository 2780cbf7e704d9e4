//! Command execution and output rendering (pretty / CSV / JSON).

use std::process::ExitCode;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::json;

use gtab_core::burnside::{table_of_marks, TableOfMarks};
use gtab_core::canonical::{
    canonical_character_table, canonical_global_table, canonical_table_of_marks,
};
use gtab_core::chartab::{character_table, CharacterTable};
use gtab_core::corpus::corpus_names;
use gtab_core::globalrep::global_table;
use gtab_core::group::parse_group_file;
use gtab_core::knutson::{
    knutson_index_element, knutson_subindex, marked_ring_from_character_table,
    marked_ring_from_global_table, marked_ring_from_table_of_marks, verify_splitting_theorem,
    IndexResult, IndexValue, MarkedRing,
};
use gtab_core::named::named_group;
use gtab_core::subgroup::{all_subgroups, Subgroup, SubgroupClassList};
use gtab_core::verify::verify_group;
use gtab_core::{Error, PermGroup, Result};

use crate::resolve::{
    cache_dir, cache_round_trip, default_jobs, parallel_map, resolve_element, resolve_group,
    resolve_normal, subgroup_hash,
};
use crate::{Cli, Cmd, Config, Format, Invariant, RingKind};

pub fn run(cli: &Cli, cfg: &Config) -> Result<ExitCode> {
    let jobs = cli.jobs.or(cfg.jobs).unwrap_or_else(default_jobs);
    match &cli.cmd {
        Cmd::Marks { group } => cmd_marks(cli, cfg, group),
        Cmd::Chartab { group } => cmd_chartab(cli, cfg, group),
        Cmd::Globaltab { group, normal } => cmd_globaltab(cli, cfg, group, normal.as_deref()),
        Cmd::Knutson {
            ring,
            group,
            normal,
            element,
            subindex,
            witness,
            all_rows,
        } => cmd_knutson(
            cli,
            *ring,
            group,
            normal.as_deref(),
            element.as_deref(),
            subindex.as_deref(),
            *witness,
            *all_rows,
        ),
        Cmd::SplitCheck { group, normal } => cmd_split_check(cli, group, normal),
        Cmd::VerifyAll { max_order } => {
            cmd_verify_all(cli, max_order.or(cfg.max_order).unwrap_or(48), jobs)
        }
        Cmd::Twins {
            corpus_dir,
            invariant,
            max_scan_order,
        } => cmd_twins(cli, corpus_dir, *invariant, *max_scan_order, jobs),
    }
}

// ---------------------------------------------------------------- tables

fn pretty_grid(col_headers: &[String], row_headers: &[String], cells: &[Vec<String>]) -> String {
    let rw = row_headers.iter().map(|s| s.len()).max().unwrap_or(0);
    let widths: Vec<usize> = col_headers
        .iter()
        .enumerate()
        .map(|(j, h)| {
            cells
                .iter()
                .map(|row| row[j].len())
                .chain(std::iter::once(h.len()))
                .max()
                .unwrap_or(1)
        })
        .collect();
    let mut out = String::new();
    out.push_str(&format!("{:rw$}", "", rw = rw));
    for (j, h) in col_headers.iter().enumerate() {
        out.push_str(&format!(" {:>w$}", h, w = widths[j]));
    }
    out.push('\n');
    for (i, row) in cells.iter().enumerate() {
        out.push_str(&format!("{:rw$}", row_headers[i], rw = rw));
        for (j, c) in row.iter().enumerate() {
            out.push_str(&format!(" {:>w$}", c, w = widths[j]));
        }
        out.push('\n');
    }
    out
}

fn marks_json(g: &PermGroup, tom: &TableOfMarks) -> String {
    let value = json!({
        "group_hash": g.content_hash(),
        "group_name": g.name(),
        "classes": (0..tom.n()).map(|i| tom.class_name(i)).collect::<Vec<_>>(),
        "marks": tom.marks,
    });
    serde_json::to_string_pretty(&value).expect("serialization cannot fail")
}

fn cmd_marks(cli: &Cli, cfg: &Config, group: &str) -> Result<ExitCode> {
    let g = resolve_group(group)?;
    let tom = table_of_marks(&g)?;
    let json = marks_json(&g, &tom);
    cache_round_trip(
        cache_dir(cfg.cache_dir.as_ref()).as_ref(),
        "marks",
        &g.content_hash(),
        &json,
        cli.no_cache,
    )?;
    match cli.format {
        Format::Csv => print!("{}", tom.to_csv()),
        Format::Json => println!("{}", json),
        Format::Pretty => {
            let headers: Vec<String> = (0..tom.n()).map(|i| tom.class_name(i)).collect();
            let cells: Vec<Vec<String>> = tom
                .marks
                .iter()
                .map(|r| r.iter().map(|v| v.to_string()).collect())
                .collect();
            print!("{}", pretty_grid(&headers, &headers, &cells));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Column labels for a character table: element order plus a letter among
/// classes of that order ("1a", "2a", "2b", ...).
fn class_labels(ct: &CharacterTable) -> Vec<String> {
    let orders: Vec<u64> = ct.classes.reps.iter().map(|r| r.order()).collect();
    orders
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let nth = orders[..i].iter().filter(|x| *x == o).count();
            format!("{}{}", o, (b'a' + (nth % 26) as u8) as char)
        })
        .collect()
}

fn cmd_chartab(cli: &Cli, cfg: &Config, group: &str) -> Result<ExitCode> {
    let g = resolve_group(group)?;
    let ct = character_table(&g)?;
    let json = ct.to_json();
    cache_round_trip(
        cache_dir(cfg.cache_dir.as_ref()).as_ref(),
        "chartab",
        &g.content_hash(),
        &json,
        cli.no_cache,
    )?;
    let cols = class_labels(&ct);
    let rows: Vec<String> = (0..ct.k()).map(|i| format!("chi{}", i)).collect();
    let cells: Vec<Vec<String>> = ct
        .rows
        .iter()
        .map(|r| r.iter().map(|e| e.reduced().to_string()).collect())
        .collect();
    match cli.format {
        Format::Json => println!("{}", json),
        Format::Csv => {
            println!("row,{}", cols.join(","));
            for (name, row) in rows.iter().zip(&cells) {
                println!("{},{}", name, row.join(","));
            }
        }
        Format::Pretty => print!("{}", pretty_grid(&cols, &rows, &cells)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_globaltab(cli: &Cli, cfg: &Config, group: &str, normal: Option<&str>) -> Result<ExitCode> {
    let g = resolve_group(group)?;
    let n = match normal {
        Some(spec) => resolve_normal(&g, spec)?,
        None => Subgroup::trivial(&g)?,
    };
    let t = global_table(&g, &n)?;
    let json = t.to_json();
    cache_round_trip(
        cache_dir(cfg.cache_dir.as_ref()).as_ref(),
        "globaltab",
        &format!("{}-{}", g.content_hash(), subgroup_hash(&n)),
        &json,
        cli.no_cache,
    )?;
    match cli.format {
        Format::Json => println!("{}", json),
        Format::Csv => print!("{}", t.to_csv()),
        Format::Pretty => print!("{}", t.pretty()),
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- knutson

struct RingContext {
    ring: MarkedRing,
    classes: Option<SubgroupClassList>,
    label: &'static str,
}

fn build_ring(kind: RingKind, g: &PermGroup, normal: Option<&str>) -> Result<RingContext> {
    Ok(match kind {
        RingKind::Char => RingContext {
            ring: marked_ring_from_character_table(&character_table(g)?),
            classes: None,
            label: "char",
        },
        RingKind::Burnside => {
            let classes = all_subgroups(g)?;
            let tom = gtab_core::burnside::table_of_marks_with(g, classes.clone())?;
            RingContext {
                ring: marked_ring_from_table_of_marks(&tom),
                classes: Some(classes),
                label: "burnside",
            }
        }
        RingKind::Global => {
            let n = match normal {
                Some(spec) => resolve_normal(g, spec)?,
                None => Subgroup::trivial(g)?,
            };
            let t = global_table(g, &n)?;
            RingContext {
                ring: marked_ring_from_global_table(&t),
                classes: None,
                label: "global",
            }
        }
    })
}

fn index_string(v: &IndexValue) -> String {
    match v {
        IndexValue::Finite(m) => m.to_string(),
        IndexValue::Infinite => "infinity".to_string(),
        IndexValue::Degenerate => "0 (degenerate)".to_string(),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_knutson(
    cli: &Cli,
    kind: RingKind,
    group: &str,
    normal: Option<&str>,
    element: Option<&str>,
    subindex: Option<&str>,
    witness: bool,
    all_rows: bool,
) -> Result<ExitCode> {
    let g = resolve_group(group)?;
    let ctx = build_ring(kind, &g, normal)?;
    let probes: Option<Vec<Vec<BigInt>>> = match subindex {
        None => None,
        Some("rows") => Some(
            (0..ctx.ring.n())
                .map(|i| {
                    let mut v = vec![BigInt::zero(); ctx.ring.n()];
                    v[i] = BigInt::one();
                    v
                })
                .collect(),
        ),
        Some(other) => {
            return Err(Error::Input(format!(
                "unknown probe set '{}' (supported: rows)",
                other
            )))
        }
    };
    let compute = |x: &[BigInt]| -> Result<IndexResult> {
        match &probes {
            Some(s) => knutson_subindex(&ctx.ring, s, x),
            None => knutson_index_element(&ctx.ring, x),
        }
    };
    if let Some(spec) = element {
        let x = resolve_element(&ctx.ring, &g, ctx.classes.as_ref(), spec)?;
        if ctx.ring.alpha(&x)?.is_zero() {
            return Err(Error::Input(format!(
                "element '{}' is zero-dimensional (alpha = 0); its index is 0 by convention",
                spec
            )));
        }
        let res = compute(&x)?;
        emit_knutson(cli, &ctx, &g, vec![(spec.to_string(), res)], witness, None);
        return Ok(ExitCode::SUCCESS);
    }
    // default: per-basis-row indices and their lcm
    let _ = all_rows;
    let mut rows = Vec::new();
    let mut lcm: Option<BigInt> = Some(BigInt::one());
    for i in 0..ctx.ring.n() {
        let mut x = vec![BigInt::zero(); ctx.ring.n()];
        x[i] = BigInt::one();
        let res = compute(&x)?;
        match &res.value {
            IndexValue::Finite(m) => {
                lcm = lcm.map(|l| l.lcm(m));
            }
            IndexValue::Infinite => lcm = None,
            IndexValue::Degenerate => {}
        }
        rows.push((ctx.ring.labels[i].clone(), res));
    }
    let lcm_str = lcm.map_or("infinity".to_string(), |l| l.to_string());
    emit_knutson(cli, &ctx, &g, rows, witness, Some(lcm_str));
    Ok(ExitCode::SUCCESS)
}

fn emit_knutson(
    cli: &Cli,
    ctx: &RingContext,
    g: &PermGroup,
    rows: Vec<(String, IndexResult)>,
    witness: bool,
    lcm: Option<String>,
) {
    match cli.format {
        Format::Json => {
            let value = json!({
                "ring": ctx.label,
                "group_name": g.name(),
                "group_hash": g.content_hash(),
                "rows": rows.iter().map(|(label, r)| json!({
                    "label": label,
                    "index": index_string(&r.value),
                    "witness": if witness {
                        r.witness.as_ref().map(|w| w.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    } else { None },
                })).collect::<Vec<_>>(),
                "lcm": lcm,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("serialization cannot fail")
            );
        }
        Format::Csv => {
            println!("label,index{}", if witness { ",witness" } else { "" });
            for (label, r) in &rows {
                let mut line = format!("{},{}", label, index_string(&r.value));
                if witness {
                    let w = r.witness.as_ref().map_or(String::new(), |w| {
                        w.iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    });
                    line.push_str(&format!(",{}", w));
                }
                println!("{}", line);
            }
            if let Some(l) = lcm {
                println!("lcm,{}", l);
            }
        }
        Format::Pretty => {
            for (label, r) in &rows {
                let mut line = format!("{}: {}", label, index_string(&r.value));
                if witness {
                    if let Some(w) = &r.witness {
                        let ws: Vec<String> = w.iter().map(|c| c.to_string()).collect();
                        line.push_str(&format!("  (witness: [{}])", ws.join(", ")));
                    }
                }
                println!("{}", line);
            }
            if let Some(l) = lcm {
                println!("lcm: {}", l);
            }
        }
    }
}

// ---------------------------------------------------------------- split-check

fn cmd_split_check(cli: &Cli, group: &str, normal: &str) -> Result<ExitCode> {
    let g = resolve_group(group)?;
    let n = resolve_normal(&g, normal)?;
    let rep = verify_splitting_theorem(&g, &n)?;
    match cli.format {
        Format::Json => println!("{}", rep.to_json()),
        _ => {
            println!("group: {} (order {})", rep.group, rep.group_order);
            println!("normal subgroup order: {}", rep.n_order);
            println!("subindex K^S(G/N): {}", rep.subindex);
            println!("extension splits: {}", rep.extension_split);
            for (p, s) in &rep.splits {
                println!("  Sylow {}-sequence splits: {}", p, s);
            }
            println!("theorem consistent: {}", rep.theorem_consistent);
            println!("multiplicative over primes: {}", rep.multiplicative);
            if rep.shemetkov_applicable {
                println!("Shemetkov case (non-split, subindex 1): q^4 | |G| holds: {}", rep.shemetkov_holds);
            }
        }
    }
    if !rep.theorem_consistent || !rep.multiplicative {
        return Err(Error::Internal("splitting theorem violated".into()));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------- verify-all

fn cmd_verify_all(cli: &Cli, max_order: u64, jobs: usize) -> Result<ExitCode> {
    let deep_order = max_order.min(24);
    let names: Vec<String> = corpus_names()
        .into_iter()
        .filter(|n| {
            named_group(n).map(|g| g.order_u64() <= max_order).unwrap_or(false)
        })
        .collect();
    let reports = parallel_map(jobs, names, |name| {
        named_group(&name).and_then(|g| verify_group(&g, deep_order))
    });
    let mut all_pass = true;
    let mut ok_reports = Vec::new();
    for r in reports {
        match r {
            Ok(rep) => {
                if !rep.pass() {
                    all_pass = false;
                }
                ok_reports.push(rep);
            }
            Err(e) => {
                all_pass = false;
                eprintln!("gtab: verify error: {}", e);
            }
        }
    }
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&ok_reports).expect("serialization cannot fail")
        ),
        _ => {
            for rep in &ok_reports {
                let status = if rep.pass() { "PASS" } else { "FAIL" };
                println!("{} (order {}): {}", rep.name, rep.order, status);
                for item in &rep.items {
                    if !item.pass {
                        println!("  FAIL {}: {}", item.name, item.detail.as_deref().unwrap_or(""));
                    }
                }
            }
        }
    }
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Error::Internal("verification failures (see report)".into()))
    }
}

// ---------------------------------------------------------------- twins

struct ScanEntry {
    name: String,
    path: Option<std::path::PathBuf>,
    order: u64,
    key: String,
}

fn load_group(name: &str, path: Option<&std::path::PathBuf>) -> Result<PermGroup> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Input(format!("cannot read {}: {}", p.display(), e)))?;
            parse_group_file(&text)
        }
        None => named_group(name),
    }
}

fn invariant_key(g: &PermGroup, invariant: Invariant) -> Result<String> {
    Ok(match invariant {
        Invariant::Char => canonical_character_table(&character_table(g)?)?.digest(),
        Invariant::Marks => canonical_table_of_marks(&table_of_marks(g)?)?.digest(),
        Invariant::Global => {
            let triv = Subgroup::trivial(g)?;
            canonical_global_table(&global_table(g, &triv)?)?.digest()
        }
        Invariant::Both => format!(
            "{}|{}",
            canonical_character_table(&character_table(g)?)?.digest(),
            canonical_table_of_marks(&table_of_marks(g)?)?.digest()
        ),
    })
}

pub fn cmd_twins(
    cli: &Cli,
    corpus_dir: &str,
    invariant: Invariant,
    max_scan_order: Option<u64>,
    jobs: usize,
) -> Result<ExitCode> {
    let sources: Vec<(String, Option<std::path::PathBuf>)> =
        if corpus_dir == "builtin" || corpus_dir == "builtin/" {
            corpus_names().into_iter().map(|n| (n, None)).collect()
        } else {
            let mut paths: Vec<std::path::PathBuf> = std::fs::read_dir(corpus_dir)
                .map_err(|e| Error::Input(format!("cannot read corpus dir {}: {}", corpus_dir, e)))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "grp"))
                .collect();
            paths.sort();
            if paths.is_empty() {
                return Err(Error::Input(format!("no .grp files in {}", corpus_dir)));
            }
            paths
                .into_iter()
                .map(|p| (p.display().to_string(), Some(p)))
                .collect()
        };
    let scanned = parallel_map(jobs, sources, |(name, path)| -> Result<Option<ScanEntry>> {
        let g = load_group(&name, path.as_ref())?;
        if max_scan_order.is_some_and(|cap| g.order_u64() > cap) {
            return Ok(None);
        }
        Ok(Some(ScanEntry {
            name: g.name().unwrap_or(&name).to_string(),
            order: g.order_u64(),
            key: invariant_key(&g, invariant)?,
            path,
        }))
    });
    let mut per_entry_error = false;
    let mut all: Vec<ScanEntry> = Vec::new();
    for d in scanned {
        match d {
            Ok(Some(d)) => all.push(d),
            Ok(None) => {}
            Err(e) => {
                per_entry_error = true;
                eprintln!("gtab: twins entry error: {}", e);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<&str, Vec<&ScanEntry>> = Default::default();
    for d in &all {
        groups.entry(&d.key).or_default().push(d);
    }
    let mut classes: Vec<&Vec<&ScanEntry>> = groups.values().filter(|v| v.len() > 1).collect();
    classes.sort_by_key(|v| (v[0].order, v[0].name.clone()));
    // the finer invariants are only computed for groups inside a twin class
    struct TwinClass {
        order: u64,
        members: Vec<String>,
        same_marks: bool,
        same_global: bool,
    }
    let refined = parallel_map(jobs, classes, |v| -> Result<TwinClass> {
        let mut marks_digests = Vec::new();
        let mut global_digests = Vec::new();
        for d in v {
            let g = load_group(&d.name, d.path.as_ref())?;
            marks_digests.push(canonical_table_of_marks(&table_of_marks(&g)?)?.digest());
            let triv = Subgroup::trivial(&g)?;
            global_digests.push(canonical_global_table(&global_table(&g, &triv)?)?.digest());
        }
        Ok(TwinClass {
            order: v[0].order,
            members: v.iter().map(|d| d.name.clone()).collect(),
            same_marks: marks_digests.iter().all(|m| *m == marks_digests[0]),
            same_global: global_digests.iter().all(|m| *m == global_digests[0]),
        })
    });
    let mut classes = Vec::new();
    for c in refined {
        match c {
            Ok(c) => classes.push(c),
            Err(e) => {
                per_entry_error = true;
                eprintln!("gtab: twins entry error: {}", e);
            }
        }
    }
    let inv_name = match invariant {
        Invariant::Char => "char",
        Invariant::Marks => "marks",
        Invariant::Both => "both",
        Invariant::Global => "global",
    };
    match cli.format {
        Format::Json => {
            let value = json!({
                "invariant": inv_name,
                "groups_scanned": all.len(),
                "classes": classes.iter().map(|c| json!({
                    "order": c.order,
                    "members": c.members,
                    "same_table_of_marks": c.same_marks,
                    "same_global_table": c.same_global,
                })).collect::<Vec<_>>(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("serialization cannot fail")
            );
        }
        _ => {
            println!(
                "invariant {}: {} groups scanned, {} nontrivial classes",
                inv_name,
                all.len(),
                classes.len()
            );
            for c in &classes {
                println!(
                    "order {}: {{{}}} (same marks: {}, same global: {})",
                    c.order,
                    c.members.join(", "),
                    c.same_marks,
                    c.same_global,
                );
            }
        }
    }
    if per_entry_error {
        return Err(Error::Input("one or more corpus entries failed (see above)".into()));
    }
    Ok(ExitCode::SUCCESS)
}
