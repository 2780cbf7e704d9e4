//! Resolution of user-facing specs: groups, normal subgroups, ring elements,
//! plus the table cache and a small worker pool.

use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use gtab_core::group::{parse_cycles, parse_group_file};
use gtab_core::knutson::MarkedRing;
use gtab_core::named::named_group;
use gtab_core::perm::Perm;
use gtab_core::subgroup::{all_subgroups, is_normal, Subgroup, SubgroupClassList};
use gtab_core::{Error, PermGroup, Result};

/// A group spec is a built-in name ("D8", "SmallGroup(48,33)", also spelled
/// "SmallGroup-48-33") or a path to a `.grp` definition file.
pub fn resolve_group(spec: &str) -> Result<PermGroup> {
    if spec.ends_with(".grp") || spec.contains('/') || Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| Error::Input(format!("cannot read group file {}: {}", spec, e)))?;
        return parse_group_file(&text);
    }
    let name = normalize_name(spec);
    named_group(&name)
}

fn normalize_name(spec: &str) -> String {
    // "SmallGroup-48-33" is the shell-friendly spelling of "SmallGroup(48,33)"
    if let Some(rest) = spec.strip_prefix("SmallGroup-") {
        if let Some((a, b)) = rest.split_once('-') {
            return format!("SmallGroup({},{})", a, b);
        }
    }
    spec.to_string()
}

/// A normal-subgroup spec: `center` / `derived` / `trivial` / `full`,
/// cycle notation, generator words over the group's generator names
/// (e.g. "r^2" or "r*s, r^2"), or the name of a built-in group that matches a
/// unique normal subgroup class by order and element-order profile.
pub fn resolve_normal(g: &PermGroup, spec: &str) -> Result<Subgroup> {
    let spec = spec.trim();
    let sub = match spec {
        "center" | "Z" => Subgroup::generated(g, &g.center_elements()?)?,
        "derived" => Subgroup::generated(g, &g.derived_elements()?)?,
        "trivial" | "e" | "1" => Subgroup::trivial(g)?,
        "full" | "G" => Subgroup::full(g)?,
        _ => match parse_element_list(g, spec) {
            Ok(gens) => Subgroup::generated(g, &gens)?,
            Err(word_err) => resolve_by_shape(g, spec).map_err(|_| word_err)?,
        },
    };
    if !is_normal(g, &sub)? {
        return Err(Error::Input(format!(
            "subgroup '{}' (order {}) is not normal in {}",
            spec,
            sub.order(),
            g.name().unwrap_or("the group")
        )));
    }
    Ok(sub)
}

/// Parses a comma-separated list of group elements, each either cycle
/// notation or a word in the named generators.
pub fn parse_element_list(g: &PermGroup, spec: &str) -> Result<Vec<Perm>> {
    let mut out = Vec::new();
    for part in split_top_level(spec) {
        out.push(parse_element(g, part.trim())?);
    }
    Ok(out)
}

/// Splits on commas that are not inside cycle parentheses.
fn split_top_level(spec: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in spec.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&spec[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&spec[start..]);
    parts.into_iter().filter(|p| !p.trim().is_empty()).collect()
}

fn parse_element(g: &PermGroup, word: &str) -> Result<Perm> {
    if word.starts_with('(') {
        return Perm::from_cycles(g.degree(), &parse_cycles(word)?);
    }
    let mut acc = Perm::identity(g.degree());
    for factor in word.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e.trim().parse().map_err(|_| {
                    Error::Input(format!("bad exponent in '{}'", factor))
                })?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        let idx = g
            .gen_names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| {
                Error::Input(format!(
                    "unknown generator '{}' (have: {})",
                    name,
                    g.gen_names().join(", ")
                ))
            })?;
        acc = &acc * &g.generators()[idx].pow(exp);
    }
    Ok(acc)
}

/// Matches a built-in group name against the normal subgroup classes of `g`
/// by order and element-order profile; the match must be unique.
fn resolve_by_shape(g: &PermGroup, spec: &str) -> Result<Subgroup> {
    let model = named_group(&normalize_name(spec))?;
    let mut want: Vec<u64> = model.elements()?.iter().map(|e| e.order()).collect();
    want.sort_unstable();
    let classes = all_subgroups(g)?;
    let mut hits = Vec::new();
    for class in &classes.classes {
        if class.conjugates.len() != 1 || class.rep.order() as u64 != model.order_u64() {
            continue;
        }
        let mut got: Vec<u64> = class.rep.elements().iter().map(|e| e.order()).collect();
        got.sort_unstable();
        if got == want {
            hits.push(class.rep.clone());
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        0 => Err(Error::Input(format!(
            "no normal subgroup of {} matches '{}'",
            g.name().unwrap_or("the group"),
            spec
        ))),
        n => Err(Error::Input(format!(
            "'{}' is ambiguous: {} normal subgroup classes match",
            spec, n
        ))),
    }
}

/// A ring-element spec: integer coefficients "1,0,-2", a basis label
/// ("2a", "chi1", a global row name), or "G/<label>" with the special labels
/// Z (center), G, e.
pub fn resolve_element(
    ring: &MarkedRing,
    g: &PermGroup,
    classes: Option<&SubgroupClassList>,
    spec: &str,
) -> Result<Vec<BigInt>> {
    let spec = spec.trim();
    if spec
        .split(',')
        .all(|p| p.trim().parse::<i64>().is_ok())
    {
        let coeffs: Vec<BigInt> = spec
            .split(',')
            .map(|p| BigInt::from(p.trim().parse::<i64>().unwrap()))
            .collect();
        if coeffs.len() != ring.n() {
            return Err(Error::Input(format!(
                "expected {} coefficients, got {}",
                ring.n(),
                coeffs.len()
            )));
        }
        return Ok(coeffs);
    }
    let label = spec.strip_prefix("G/").unwrap_or(spec);
    let idx = match label {
        "Z" | "G" | "e" | "1" => {
            let classes = classes.ok_or_else(|| {
                Error::Input(format!("label '{}' needs a subgroup-class basis", spec))
            })?;
            let target = match label {
                "Z" => Subgroup::generated(g, &g.center_elements()?)?,
                "G" => Subgroup::full(g)?,
                _ => Subgroup::trivial(g)?,
            };
            classes.class_of(&target).ok_or_else(|| {
                Error::Internal(format!("subgroup for '{}' not found in the lattice", spec))
            })?
        }
        _ => ring
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| {
                Error::Input(format!(
                    "unknown basis label '{}' (have: {})",
                    spec,
                    ring.labels.join(", ")
                ))
            })?,
    };
    let mut coeffs = vec![BigInt::zero(); ring.n()];
    coeffs[idx] = BigInt::one();
    Ok(coeffs)
}

/// Cache directory: `GLOBAL_TABLES_CACHE`, then the config file, then the
/// platform cache dir under `global-tables`.
pub fn cache_dir(cfg_dir: Option<&PathBuf>) -> Option<PathBuf> {
    if let Ok(dir) = std::env::var("GLOBAL_TABLES_CACHE") {
        return Some(PathBuf::from(dir));
    }
    if let Some(dir) = cfg_dir {
        return Some(dir.clone());
    }
    dirs::cache_dir().map(|d| d.join("global-tables"))
}

/// Content-addressed cache lookup: returns the cached text if present and
/// bit-identical requirements allow reuse; otherwise stores `json`.
/// A cached file that differs from the recomputed table is an internal error.
pub fn cache_round_trip(
    dir: Option<&PathBuf>,
    kind: &str,
    key: &str,
    json: &str,
    no_cache: bool,
) -> Result<()> {
    if no_cache {
        return Ok(());
    }
    let Some(dir) = dir else { return Ok(()) };
    let path = dir.join(format!("{}-{}.json", kind, key));
    if path.is_file() {
        let cached = std::fs::read_to_string(&path)
            .map_err(|e| Error::Input(format!("cannot read cache {}: {}", path.display(), e)))?;
        if cached != json {
            return Err(Error::Internal(format!(
                "cache entry {} does not reload bit-identically",
                path.display()
            )));
        }
        return Ok(());
    }
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Input(format!("cannot create cache dir {}: {}", dir.display(), e)))?;
    // advisory write-then-rename so concurrent writers never interleave
    let tmp = dir.join(format!(".{}-{}.json.tmp-{}", kind, key, std::process::id()));
    std::fs::write(&tmp, json)
        .and_then(|_| std::fs::rename(&tmp, &path))
        .map_err(|e| Error::Input(format!("cannot write cache {}: {}", path.display(), e)))?;
    Ok(())
}

/// Hash of a subgroup's element set, for cache keys.
pub fn subgroup_hash(n: &Subgroup) -> String {
    let mut h = Sha256::new();
    for e in n.elements() {
        h.update(format!("{:?};", e.images()));
    }
    hex::encode(&h.finalize()[..8])
}

/// Maps `f` over `items` with `jobs` worker threads, preserving order.
pub fn parallel_map<T, R, F>(jobs: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let jobs = jobs.max(1);
    let n = items.len();
    let work: Vec<Mutex<Option<T>>> = items.into_iter().map(|t| Mutex::new(Some(t))).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<Mutex<Option<R>>> = (0..n).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(n.max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let item = work[i].lock().unwrap().take().unwrap();
                *results[i].lock().unwrap() = Some(f(item));
            });
        }
    });
    results
        .into_iter()
        .map(|m| m.into_inner().unwrap().unwrap())
        .collect()
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
