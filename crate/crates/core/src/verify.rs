//! The one-shot verification harness: runs every module's invariant suite on
//! a group and over the built-in corpus.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::burnside::{burnside_multiply, mark_brute_force, table_of_marks, BurnsideElement};
use crate::chartab::{character_table, inner_product};
use crate::corpus::corpus;
use crate::cyclotomic::Cyc;
use crate::error::Result;
use crate::globalrep::{
    global_table, recover_abelian_subgroups, recover_element_orders, verify_block_properties,
    ItemResult,
};
use crate::group::PermGroup;
use crate::hnf;
use crate::knutson::{
    burnside_subindex, knutson_subindex, marked_ring_from_table_of_marks, sylow_split_profile,
    verify_splitting_theorem, IndexValue,
};
use crate::subgroup::{all_subgroups, Subgroup};

/// Small deterministic PRNG so the harness needs no external randomness.
pub struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    fn coeff(&mut self, bound: i64) -> i64 {
        (self.next() % (2 * bound as u64 + 1)) as i64 - bound
    }
}

#[derive(Debug, Serialize)]
pub struct GroupReport {
    pub name: String,
    pub order: u64,
    pub items: Vec<ItemResult>,
}

impl GroupReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

fn item(name: &'static str, detail: Option<String>) -> ItemResult {
    ItemResult {
        name,
        pass: detail.is_none(),
        detail,
    }
}

/// Runs the full invariant suite on one group. The heavier global-table
/// items are skipped above `deep_order`.
pub fn verify_group(g: &PermGroup, deep_order: u64) -> Result<GroupReport> {
    let mut items = Vec::new();
    let mut rng = XorShift(0x9E3779B97F4A7C15 ^ g.order_u64());

    // conjugacy classes: sizes divide |G|, partition the group, and are
    // conjugation-stable on random pairs
    items.push(item("conjugacy-classes", check_classes(g, &mut rng)?));

    // table-of-marks laws and brute-force agreement
    let classes = all_subgroups(g)?;
    let tom = crate::burnside::table_of_marks_with(g, all_subgroups(g)?)?;
    items.push(item("marks-laws", check_marks_laws(g, &tom)?));
    items.push(item("marks-brute-force", check_marks_brute(g, &tom)?));
    items.push(item(
        "burnside-homomorphism",
        check_burnside_hom(&tom, &mut rng)?,
    ));

    // character table: orthogonality, degree laws
    items.push(item("chartab-orthogonality", check_chartab(g)?));

    // Knutson subindex closed formula vs ring computation, every class
    items.push(item("subindex-formula", check_subindex(g, &classes)?));

    // splitting theorem and multiplicativity on every normal class
    items.push(item("splitting-theorem", check_splitting(g, &classes)?));

    if g.order_u64() <= deep_order {
        let triv = Subgroup::trivial(g)?;
        let t = global_table(g, &triv)?;
        let rep = verify_block_properties(&t)?;
        for it in rep.items {
            items.push(it);
        }
        items.push(item("global-rows-independent", check_row_independence(&t)?));
        items.push(item("recovery", check_recovery(g, &t)?));
    }

    Ok(GroupReport {
        name: g.name().unwrap_or("?").to_string(),
        order: g.order_u64(),
        items,
    })
}

pub fn check_classes(g: &PermGroup, rng: &mut XorShift) -> Result<Option<String>> {
    let cc = g.conjugacy_classes()?;
    let order = g.order_u64() as usize;
    if cc.sizes.iter().sum::<usize>() != order {
        return Ok(Some("class sizes do not partition the group".into()));
    }
    if cc.sizes.iter().any(|s| order % s != 0) {
        return Ok(Some("class size does not divide the order".into()));
    }
    let elems = g.elements()?;
    for _ in 0..100 {
        let a = &elems[rng.below(order)];
        let h = &elems[rng.below(order)];
        let conj = a.conjugate_by(h);
        if cc.class_of_element(g, a)? != cc.class_of_element(g, &conj)? {
            return Ok(Some("conjugation moved an element across classes".into()));
        }
    }
    Ok(None)
}

pub fn check_marks_laws(g: &PermGroup, tom: &crate::burnside::TableOfMarks) -> Result<Option<String>> {
    let n = tom.n();
    let order = g.order_u64() as i64;
    for i in 0..n {
        let class = &tom.classes.classes[i];
        for j in i + 1..n {
            if tom.marks[i][j] != 0 {
                return Ok(Some(format!("entry ({}, {}) above the diagonal", i, j)));
            }
        }
        let expected_diag = (class.normalizer.order() / class.rep.order()) as i64;
        if tom.marks[i][i] != expected_diag {
            return Ok(Some(format!("diagonal at class {} != |N_G(H)/H|", i)));
        }
        if tom.marks[i][0] != order / class.rep.order() as i64 {
            return Ok(Some(format!("first column at class {} != |G/H|", i)));
        }
        if tom.marks[i][i] == 0 {
            return Ok(Some(format!("zero diagonal at class {}", i)));
        }
    }
    Ok(None)
}

pub fn check_marks_brute(g: &PermGroup, tom: &crate::burnside::TableOfMarks) -> Result<Option<String>> {
    let n = tom.n();
    for i in 0..n {
        for j in 0..n {
            let brute =
                mark_brute_force(g, &tom.classes.classes[i].rep, &tom.classes.classes[j].rep)?;
            if tom.marks[i][j] != brute as i64 {
                return Ok(Some(format!(
                    "mark ({}, {}): formula {} vs brute force {}",
                    i, j, tom.marks[i][j], brute
                )));
            }
        }
    }
    Ok(None)
}

pub fn check_burnside_hom(
    tom: &crate::burnside::TableOfMarks,
    rng: &mut XorShift,
) -> Result<Option<String>> {
    let n = tom.n();
    for trial in 0..50 {
        let x = BurnsideElement {
            coeffs: (0..n).map(|_| rng.coeff(3)).collect(),
        };
        let y = BurnsideElement {
            coeffs: (0..n).map(|_| rng.coeff(3)).collect(),
        };
        let p = burnside_multiply(tom, &x, &y)?;
        let lhs = p.marks(tom);
        let rhs: Vec<i64> = x
            .marks(tom)
            .iter()
            .zip(y.marks(tom))
            .map(|(a, b)| a * b)
            .collect();
        if lhs != rhs {
            return Ok(Some(format!("marks homomorphism broke on trial {}", trial)));
        }
    }
    Ok(None)
}

pub fn check_chartab(g: &PermGroup) -> Result<Option<String>> {
    let ct = character_table(g)?;
    let k = ct.k();
    let order = g.order_u64();
    // degree laws
    let sum_sq: u64 = ct.degrees.iter().map(|d| d * d).sum();
    if sum_sq != order {
        return Ok(Some("sum of squared degrees != |G|".into()));
    }
    if ct.degrees.iter().any(|d| order % d != 0) {
        return Ok(Some("a degree does not divide |G|".into()));
    }
    // first row orthogonality
    for i in 0..k {
        for j in 0..k {
            let ip = inner_product(g, &ct.row(i), &ct.row(j))?;
            let expect = if i == j { Cyc::one() } else { Cyc::zero() };
            if ip != expect {
                return Ok(Some(format!("row orthogonality failed at ({}, {})", i, j)));
            }
        }
    }
    // second (column) orthogonality
    for l in 0..k {
        for m in 0..k {
            let mut s = Cyc::zero();
            for i in 0..k {
                s = s.add(&ct.rows[i][l].mul(&ct.rows[i][m].conj()));
            }
            let expect = if l == m {
                Cyc::from_int((order / ct.classes.sizes[l] as u64) as i64)
            } else {
                Cyc::zero()
            };
            if s != expect {
                return Ok(Some(format!(
                    "column orthogonality failed at ({}, {})",
                    l, m
                )));
            }
        }
    }
    Ok(None)
}

pub fn check_subindex(
    g: &PermGroup,
    classes: &crate::subgroup::SubgroupClassList,
) -> Result<Option<String>> {
    let tom = table_of_marks(g)?;
    let ring = marked_ring_from_table_of_marks(&tom);
    let n = ring.n();
    let probes: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            v
        })
        .collect();
    for i in 0..n {
        let mut x = vec![BigInt::zero(); n];
        x[i] = BigInt::one();
        let sub = knutson_subindex(&ring, &probes, &x)?;
        let formula = burnside_subindex(g, classes, i)?;
        if sub.value != IndexValue::Finite(formula.clone()) {
            return Ok(Some(format!(
                "class {}: ring subindex {:?} vs formula {}",
                i, sub.value, formula
            )));
        }
    }
    Ok(None)
}

pub fn check_splitting(
    g: &PermGroup,
    classes: &crate::subgroup::SubgroupClassList,
) -> Result<Option<String>> {
    let nilpotent = is_nilpotent(g)?;
    for (ci, class) in classes.classes.iter().enumerate() {
        if class.conjugates.len() != 1 {
            continue; // not normal
        }
        let n = &class.rep;
        let rep = verify_splitting_theorem(g, n)?;
        if !rep.theorem_consistent {
            return Ok(Some(format!("main theorem violated at normal class {}", ci)));
        }
        if !rep.multiplicative {
            return Ok(Some(format!("multiplicativity broke at normal class {}", ci)));
        }
        if nilpotent && (rep.subindex == "1") != rep.extension_split {
            return Ok(Some(format!(
                "nilpotent lemma violated at normal class {}",
                ci
            )));
        }
        // Lemma: splitting per prime matches the profile recomputed directly
        let profile = sylow_split_profile(g, n)?;
        if profile != rep.splits {
            return Ok(Some(format!("split profile unstable at class {}", ci)));
        }
    }
    Ok(None)
}

fn is_nilpotent(g: &PermGroup) -> Result<bool> {
    // nilpotent iff G is the direct product of its Sylow subgroups: every
    // Sylow subgroup is normal
    let order = g.order_u64();
    let mut n = order;
    let mut p = 2;
    while n > 1 {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            let gp = crate::subgroup::sylow_subgroup(g, p)?;
            if !crate::subgroup::is_normal(g, &gp)? {
                return Ok(false);
            }
        }
        p += 1;
    }
    Ok(true)
}

pub fn check_row_independence(t: &crate::globalrep::GlobalTable) -> Result<Option<String>> {
    let rows: Vec<Vec<BigInt>> = match t.integer_entries() {
        Some(rows) => rows,
        None => {
            // expand cyclotomics to integer coordinates
            t.entries
                .iter()
                .map(|row| {
                    let mut out = Vec::new();
                    for e in row {
                        for q in e.to_conductor(t.conductor).coords() {
                            out.push(q.numer().clone());
                        }
                    }
                    out
                })
                .collect()
        }
    };
    if hnf::hnf(&rows).rank != rows.len() {
        return Ok(Some("rows of T(G, e) are linearly dependent".into()));
    }
    Ok(None)
}

pub fn check_recovery(g: &PermGroup, t: &crate::globalrep::GlobalTable) -> Result<Option<String>> {
    // element orders recovered from the table equal the true class orders
    let recovered = recover_element_orders(t)?;
    let cc = g.conjugacy_classes()?;
    let truth: Vec<usize> = {
        let gblock = t.blocks.last().unwrap();
        gblock
            .col_orbits
            .iter()
            .map(|orbit| g.elements().unwrap()[orbit[0]].order() as usize)
            .collect()
    };
    let _ = cc;
    if recovered != truth {
        return Ok(Some("element-order recovery mismatch".into()));
    }
    // abelian recognition and isomorphism types
    for rec in recover_abelian_subgroups(t)? {
        let class = &t.classes.classes[t.blocks[rec.block].class_index];
        let h_grp = class.rep.as_group(g)?;
        let truly_abelian = h_grp.conjugacy_classes()?.len() == h_grp.order_u64() as usize;
        if rec.abelian != truly_abelian {
            return Ok(Some(format!("abelian flag wrong at block {}", rec.block)));
        }
        if truly_abelian {
            let expect = abelian_name(&h_grp)?;
            if rec.iso_type.as_deref() != Some(expect.as_str()) {
                return Ok(Some(format!(
                    "iso type at block {}: {:?} vs {}",
                    rec.block, rec.iso_type, expect
                )));
            }
        }
    }
    Ok(None)
}

/// Elementary-divisor name of an abelian permutation group, computed from
/// element orders (ground truth for the recovery check).
fn abelian_name(h: &PermGroup) -> Result<String> {
    let mut counts = std::collections::BTreeMap::new();
    for e in h.elements()? {
        *counts.entry(e.order() as usize).or_insert(0usize) += 1;
    }
    let counts: Vec<(usize, usize)> = counts.into_iter().collect();
    crate::globalrep::abelian_type_from_order_counts(h.order_u64() as usize, &counts)
}

/// Runs [`verify_group`] over the whole built-in corpus up to `max_order`.
pub fn verify_all(max_order: u64, deep_order: u64) -> Result<Vec<GroupReport>> {
    let groups = corpus(max_order)?;
    let mut out = Vec::new();
    for g in &groups {
        out.push(verify_group(g, deep_order)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::named_group;

    #[test]
    fn spot_groups_pass() {
        for name in ["S3", "D8", "Q8", "A4", "C12"] {
            let g = named_group(name).unwrap();
            let rep = verify_group(&g, 24).unwrap();
            assert!(
                rep.pass(),
                "{}: {:?}",
                name,
                rep.items.iter().filter(|i| !i.pass).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn verify_all_small() {
        let reports = verify_all(12, 12).unwrap();
        assert!(!reports.is_empty());
        for r in &reports {
            assert!(
                r.pass(),
                "{}: {:?}",
                r.name,
                r.items.iter().filter(|i| !i.pass).collect::<Vec<_>>()
            );
        }
    }
}
