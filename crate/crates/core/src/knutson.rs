//! Marked commutative rings and Knutson indices: the HNF-based element index
//! K_r(x), the probe-set subindex K_r^S(x), the finite inverse set of the
//! reduced case, the Burnside-ring subindex formula, and the Sylow splitting
//! harness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::burnside::TableOfMarks;
use crate::chartab::CharacterTable;
use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::globalrep::GlobalTable;
use crate::group::PermGroup;
use crate::hnf;
use crate::subgroup::{all_subgroups, complement_exists_with, sylow_subgroup, Subgroup,
                      SubgroupClassList};

const DEFAULT_COMPONENT_BOUND: usize = 14;

/// A commutative ring embedded by its marks matrix: multiplication is
/// pointwise on mark vectors, the dimension map alpha reads the first column,
/// and a fixed regular element r is given over the basis rows.
pub struct MarkedRing {
    pub labels: Vec<String>,
    /// n basis rows by m mark columns, at a common conductor
    pub marks: Vec<Vec<Cyc>>,
    pub conductor: u64,
    /// coefficients of the regular element over the basis rows
    pub regular: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexValue {
    Finite(BigInt),
    Infinite,
    /// alpha(x) = 0; the paper sets K_r(x) = 0 for zero-dimensional elements
    Degenerate,
}

impl IndexValue {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            IndexValue::Finite(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IndexResult {
    pub value: IndexValue,
    /// lambda with x * lambda = value * r, over the basis rows
    pub witness: Option<Vec<BigInt>>,
}

impl MarkedRing {
    pub fn n(&self) -> usize {
        self.marks.len()
    }

    pub fn m(&self) -> usize {
        self.marks.first().map_or(0, |r| r.len())
    }

    /// Mark vector of an integer combination of basis rows.
    pub fn mark_vector(&self, x: &[BigInt]) -> Result<Vec<Cyc>> {
        if x.len() != self.n() {
            return Err(Error::Input("coefficient length mismatch".into()));
        }
        let mut v = vec![Cyc::zero(); self.m()];
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                let q = BigRational::from(c.clone());
                for (j, e) in self.marks[i].iter().enumerate() {
                    v[j] = v[j].add(&e.scale(&q));
                }
            }
        }
        Ok(v)
    }

    pub fn alpha(&self, x: &[BigInt]) -> Result<BigInt> {
        let v = self.mark_vector(x)?;
        v[0].as_integer()
            .ok_or_else(|| Error::Internal("alpha value not a rational integer".into()))
    }

    pub fn regular_marks(&self) -> Result<Vec<Cyc>> {
        self.mark_vector(&self.regular)
    }

    /// Flattens a mark vector into integer coordinates at the ring conductor.
    pub fn int_coords(&self, v: &[Cyc]) -> Result<Vec<BigInt>> {
        let mut out = Vec::new();
        for e in v {
            for q in e.to_conductor(self.conductor).coords() {
                if !q.is_integer() {
                    return Err(Error::Internal(
                        "mark vector is not integral over the power basis".into(),
                    ));
                }
                out.push(q.to_integer());
            }
        }
        Ok(out)
    }

    /// Checks the MarkedRing invariants: alpha(r) != 0, regularity of r, and
    /// Q-linear independence of the basis rows.
    pub fn validate(&self) -> Result<()> {
        let r_marks = self.regular_marks()?;
        let alpha_r = r_marks[0]
            .as_integer()
            .ok_or_else(|| Error::Input("alpha(r) not an integer".into()))?;
        if alpha_r.is_zero() {
            return Err(Error::Input("alpha(r) = 0".into()));
        }
        for (i, row) in self.marks.iter().enumerate() {
            let alpha_b = row[0]
                .as_integer()
                .ok_or_else(|| Error::Input("alpha(basis) not an integer".into()))?;
            let q = BigRational::from(alpha_b);
            for (j, rv) in r_marks.iter().enumerate() {
                if row[j].mul(rv) != rv.scale(&q) {
                    return Err(Error::Input(format!(
                        "r is not regular against basis row {} at column {}",
                        i, j
                    )));
                }
            }
        }
        let int_rows = self
            .marks
            .iter()
            .map(|r| self.int_coords(r))
            .collect::<Result<Vec<_>>>()?;
        if hnf::hnf(&int_rows).rank != self.n() {
            return Err(Error::Input("basis rows are linearly dependent".into()));
        }
        Ok(())
    }
}

pub fn marked_ring_from_character_table(ct: &CharacterTable) -> MarkedRing {
    MarkedRing {
        labels: (0..ct.k()).map(|i| format!("chi{}", i)).collect(),
        marks: ct.rows.clone(),
        conductor: ct.conductor,
        regular: ct.degrees.iter().map(|d| BigInt::from(*d)).collect(),
    }
}

pub fn marked_ring_from_table_of_marks(tom: &TableOfMarks) -> MarkedRing {
    let n = tom.n();
    let mut regular = vec![BigInt::zero(); n];
    regular[0] = BigInt::one(); // the free orbit G/{e} is the first class
    MarkedRing {
        labels: (0..n).map(|i| tom.class_name(i)).collect(),
        marks: tom
            .marks
            .iter()
            .map(|row| row.iter().map(|&v| Cyc::from_int(v)).collect())
            .collect(),
        conductor: 1,
        regular,
    }
}

pub fn marked_ring_from_global_table(gt: &GlobalTable) -> MarkedRing {
    // r = (G/N, reg_N): over the first (N) block, each character orbit enters
    // with coefficient degree * orbit size
    let mut regular = vec![BigInt::zero(); gt.n_rows()];
    let nblock = &gt.blocks[0];
    for (oi, orbit) in nblock.row_orbits.iter().enumerate() {
        let deg = nblock.table.degrees[orbit[0]];
        regular[nblock.row_start + oi] = BigInt::from(deg * orbit.len() as u64);
    }
    MarkedRing {
        labels: (0..gt.n_rows()).map(|r| gt.row_name(r)).collect(),
        marks: gt.entries.clone(),
        conductor: gt.conductor,
        regular,
    }
}

/// K_r(x) by lattice arithmetic: the minimal positive m with m*r inside the
/// lattice spanned by the products basis_row * x, plus the witness lambda.
pub fn knutson_index_element(ring: &MarkedRing, x: &[BigInt]) -> Result<IndexResult> {
    let alpha_x = ring.alpha(x)?;
    if alpha_x.is_zero() {
        return Ok(IndexResult {
            value: IndexValue::Degenerate,
            witness: None,
        });
    }
    // Cor 2.4: r*x = alpha(x)*r puts alpha(x) in the index ideal, so the
    // index divides alpha(x); for alpha(x) = +-1 the regular coefficients
    // scaled by alpha(x) already witness index 1
    if alpha_x.magnitude() == &num_bigint::BigUint::one() {
        let witness: Vec<BigInt> = ring.regular.iter().map(|c| c * &alpha_x).collect();
        return Ok(IndexResult {
            value: IndexValue::Finite(BigInt::one()),
            witness: Some(witness),
        });
    }
    let mx = ring.mark_vector(x)?;
    let product_rows = ring
        .marks
        .iter()
        .map(|row| {
            let prod: Vec<Cyc> = row.iter().zip(&mx).map(|(a, b)| a.mul(b)).collect();
            ring.int_coords(&prod)
        })
        .collect::<Result<Vec<_>>>()?;
    let r_coords = ring.int_coords(&ring.regular_marks()?)?;
    // shrink the lattice problem before the HNF: coordinates where every
    // product row vanishes force r to vanish too (r is regular and
    // alpha(x) != 0), and zero or duplicate rows do not change the spanned
    // lattice. Basis-element products are very sparse in marks rings, so this
    // collapses the matrix dramatically.
    let n_cols = r_coords.len();
    let mut keep_cols = Vec::new();
    for c in 0..n_cols {
        if product_rows.iter().any(|row| !row[c].is_zero()) {
            keep_cols.push(c);
        } else if !r_coords[c].is_zero() {
            return Err(Error::Internal(
                "regular element outside the product span with alpha(x) != 0".into(),
            ));
        }
    }
    let mut kept_rows: Vec<Vec<BigInt>> = Vec::new();
    let mut kept_idx: Vec<usize> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (j, row) in product_rows.iter().enumerate() {
        let proj: Vec<BigInt> = keep_cols.iter().map(|&c| row[c].clone()).collect();
        if proj.iter().all(|v| v.is_zero()) {
            continue;
        }
        if seen.insert(proj.clone()) {
            kept_rows.push(proj);
            kept_idx.push(j);
        }
    }
    let r_proj: Vec<BigInt> = keep_cols.iter().map(|&c| r_coords[c].clone()).collect();
    let h = hnf::hnf(&kept_rows);
    let (m, w_small) = hnf::lattice_multiple(&h, &r_proj).ok_or_else(|| {
        Error::Internal("regular element outside the product span with alpha(x) != 0".into())
    })?;
    let mut witness = vec![BigInt::zero(); ring.n()];
    for (k, j) in kept_idx.iter().enumerate() {
        witness[*j] = w_small[k].clone();
    }
    debug_assert!({
        // the witness must reproduce m*r exactly
        let mut acc = vec![BigInt::zero(); r_coords.len()];
        for (i, w) in witness.iter().enumerate() {
            for (c, v) in product_rows[i].iter().enumerate() {
                acc[c] += w * v;
            }
        }
        acc.iter()
            .zip(&r_coords)
            .all(|(a, r)| a == &(&m * r))
    });
    Ok(IndexResult {
        value: IndexValue::Finite(m),
        witness: Some(witness),
    })
}

/// K_r(R, gens) = lcm of the element indices; all generators must have
/// alpha != 0.
pub fn knutson_index_ring(ring: &MarkedRing, gens: &[Vec<BigInt>]) -> Result<BigInt> {
    let mut acc = BigInt::one();
    for x in gens {
        let res = knutson_index_element(ring, x)?;
        match res.value {
            IndexValue::Finite(m) => acc = acc.lcm(&m),
            _ => {
                return Err(Error::Input(
                    "zero-dimensional generator in ring index".into(),
                ))
            }
        }
    }
    Ok(acc)
}

/// K_r^S(x): gcd of the multipliers of probes landing on the r-line;
/// infinity when no probe lands.
pub fn knutson_subindex(
    ring: &MarkedRing,
    probes: &[Vec<BigInt>],
    x: &[BigInt],
) -> Result<IndexResult> {
    let mx = ring.mark_vector(x)?;
    let r_marks = ring.regular_marks()?;
    let alpha_r = r_marks[0].as_integer().unwrap_or_else(BigInt::zero);
    let mut acc: Option<BigInt> = None;
    for s in probes {
        let ms = ring.mark_vector(s)?;
        let prod: Vec<Cyc> = ms.iter().zip(&mx).map(|(a, b)| a.mul(b)).collect();
        // prod = t * r_marks for an integer t?
        let Some(a0) = prod[0].as_integer() else {
            continue;
        };
        let (t, rem) = a0.div_rem(&alpha_r);
        if !rem.is_zero() {
            continue;
        }
        let tq = BigRational::from(t.clone());
        if prod
            .iter()
            .zip(&r_marks)
            .all(|(p, r)| p == &r.scale(&tq))
        {
            acc = Some(match acc {
                None => t.abs(),
                Some(g) => g.gcd(&t),
            });
        }
    }
    Ok(match acc {
        Some(g) => IndexResult {
            value: IndexValue::Finite(g),
            witness: None,
        },
        None => IndexResult {
            value: IndexValue::Infinite,
            witness: None,
        },
    })
}

/// Brute-force oracle for K_r(x): search coefficient vectors with entries in
/// [-b, b] for the least positive t with lambda * (rows * x) = t * r.
/// Returns None when no multiple of r is hit within the box.
pub fn brute_force_index(ring: &MarkedRing, x: &[BigInt], b: i64) -> Result<Option<BigInt>> {
    let mx = ring.mark_vector(x)?;
    let to_i128 = |v: Vec<BigInt>| -> Result<Vec<i128>> {
        v.into_iter()
            .map(|c| {
                i128::try_from(&c)
                    .map_err(|_| Error::Budget("brute-force coordinates exceed i128".into()))
            })
            .collect()
    };
    let product_rows = ring
        .marks
        .iter()
        .map(|row| {
            let prod: Vec<Cyc> = row.iter().zip(&mx).map(|(a, b)| a.mul(b)).collect();
            to_i128(ring.int_coords(&prod)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let r_coords = to_i128(ring.int_coords(&ring.regular_marks()?)?)?;
    let dim = r_coords.len();
    let mut best: Option<i128> = None;
    // depth-first over the coefficient box with incremental partial sums
    fn rec(
        rows: &[Vec<i128>],
        r: &[i128],
        b: i64,
        level: usize,
        acc: &mut [i128],
        best: &mut Option<i128>,
    ) {
        if level == rows.len() {
            // acc == t * r for a positive integer t?
            let mut t: Option<i128> = None;
            for (a, rv) in acc.iter().zip(r) {
                if *rv == 0 {
                    if *a != 0 {
                        return;
                    }
                } else {
                    if a % rv != 0 {
                        return;
                    }
                    let q = a / rv;
                    match t {
                        None => t = Some(q),
                        Some(prev) if prev == q => {}
                        _ => return,
                    }
                }
            }
            if let Some(t) = t {
                if t > 0 && best.map_or(true, |m| t < m) {
                    *best = Some(t);
                }
            }
            return;
        }
        // start at -b and walk upward, adjusting the partial sum by one row
        for (c, av) in acc.iter_mut().zip(&rows[level]) {
            *c -= b as i128 * av;
        }
        for step in -b..=b {
            rec(rows, r, b, level + 1, acc, best);
            if step < b {
                for (c, av) in acc.iter_mut().zip(&rows[level]) {
                    *c += av;
                }
            }
        }
        for (c, av) in acc.iter_mut().zip(&rows[level]) {
            *c -= b as i128 * av;
        }
    }
    let mut acc = vec![0i128; dim];
    rec(&product_rows, &r_coords, b, 0, &mut acc, &mut best);
    Ok(best.map(BigInt::from))
}

/// The Burnside-ring subindex of G/H_i per the closed formula:
/// gcd over classes H_j whose every conjugate meets H_i trivially of
/// |G| / (|H_i| |H_j|).
pub fn burnside_subindex(
    g: &PermGroup,
    classes: &SubgroupClassList,
    i: usize,
) -> Result<BigInt> {
    let order = BigInt::from(g.order_u64());
    let hi = &classes.classes[i].rep;
    let mut acc: Option<BigInt> = None;
    for cj in &classes.classes {
        let disjoint = cj.conjugates.iter().all(|key| {
            key.iter().filter(|e| hi.contains_index(**e)).count() == 1
        });
        if !disjoint {
            continue;
        }
        let m = &order / BigInt::from(hi.order() * cj.rep.order());
        acc = Some(match acc {
            None => m,
            Some(gcd) => gcd.gcd(&m),
        });
    }
    acc.ok_or_else(|| Error::Internal("no disjoint class; trivial class missing".into()))
}

// ---------------------------------------------------------------------------
// Finite inverse set (Prop 2.5)
// ---------------------------------------------------------------------------

/// Column components of the marks matrix: Galois orbits of columns, with
/// exactly equal columns merged. The component containing the alpha column
/// comes first.
pub fn column_components(ring: &MarkedRing) -> Vec<Vec<usize>> {
    let m = ring.m();
    let col = |j: usize| -> Vec<Cyc> {
        ring.marks.iter().map(|row| row[j].clone()).collect()
    };
    let cols: Vec<Vec<Cyc>> = (0..m).map(col).collect();
    let mut comp_of: Vec<Option<usize>> = vec![None; m];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let n_cond = ring.conductor;
    for j in 0..m {
        if comp_of[j].is_some() {
            continue;
        }
        let id = comps.len();
        comp_of[j] = Some(id);
        let mut members = vec![j];
        for j2 in j + 1..m {
            if comp_of[j2].is_some() {
                continue;
            }
            let same = cols[j] == cols[j2]
                || (1..n_cond)
                    .filter(|t| num_integer::gcd(*t, n_cond) == 1)
                    .any(|t| {
                        cols[j]
                            .iter()
                            .zip(&cols[j2])
                            .all(|(a, b)| {
                                a.to_conductor(n_cond).galois_conj(t).map(|c| &c == b).unwrap_or(false)
                            })
                    });
            if same {
                comp_of[j2] = Some(id);
                members.push(j2);
            }
        }
        comps.push(members);
    }
    // alpha component first (it contains column 0 by construction)
    comps
}

/// The finite probe set S of Prop 2.5: for every subset T of the non-alpha
/// components, a minimal positive-dimensional element vanishing on T.
pub fn finite_inverse_set(ring: &MarkedRing) -> Result<Vec<Vec<BigInt>>> {
    finite_inverse_set_bounded(ring, DEFAULT_COMPONENT_BOUND)
}

pub fn finite_inverse_set_bounded(
    ring: &MarkedRing,
    component_bound: usize,
) -> Result<Vec<Vec<BigInt>>> {
    let comps = column_components(ring);
    if comps.len() > component_bound {
        return Err(Error::Budget(format!(
            "{} components exceeds the bound {}",
            comps.len(),
            component_bound
        )));
    }
    let non_alpha: Vec<usize> = (1..comps.len()).collect();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for mask in 0u32..(1 << non_alpha.len()) {
        let t_cols: Vec<usize> = non_alpha
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .flat_map(|(_, &c)| comps[c].iter().copied())
            .collect();
        // Z(T): integer combinations of basis rows vanishing on the T columns
        let kernel: Vec<Vec<BigInt>> = if t_cols.is_empty() {
            (0..ring.n())
                .map(|i| {
                    let mut v = vec![BigInt::zero(); ring.n()];
                    v[i] = BigInt::one();
                    v
                })
                .collect()
        } else {
            let constraint: Vec<Vec<BigInt>> = (0..ring.n())
                .map(|i| {
                    let restricted: Vec<Cyc> =
                        t_cols.iter().map(|&j| ring.marks[i][j].clone()).collect();
                    ring.int_coords(&restricted)
                })
                .collect::<Result<Vec<_>>>()?;
            hnf::row_kernel(&constraint)
        };
        if kernel.is_empty() {
            continue;
        }
        // d = positive generator of alpha(Z(T)); element via extended gcd
        let alphas: Vec<BigInt> = kernel
            .iter()
            .map(|v| ring.alpha(v))
            .collect::<Result<Vec<_>>>()?;
        let mut d = BigInt::zero();
        let mut elem = vec![BigInt::zero(); ring.n()];
        for (v, a) in kernel.iter().zip(&alphas) {
            if a.is_zero() {
                continue;
            }
            if d.is_zero() {
                d = a.abs();
                let sign = if a.is_negative() { -1 } else { 1 };
                elem = v.iter().map(|c| c * sign).collect();
            } else {
                let eg = d.extended_gcd(a);
                let mut next = vec![BigInt::zero(); ring.n()];
                for i in 0..ring.n() {
                    next[i] = &eg.x * &elem[i] + &eg.y * &v[i];
                }
                d = eg.gcd;
                elem = next;
            }
        }
        if d.is_zero() {
            continue;
        }
        if !out.contains(&elem) {
            out.push(elem);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Sylow splitting harness (§3)
// ---------------------------------------------------------------------------

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// For each prime dividing |G|: does the Sylow sequence
/// 1 -> N_p -> G_p -> Gamma_p -> 1 split?
pub fn sylow_split_profile(g: &PermGroup, n: &Subgroup) -> Result<Vec<(u64, bool)>> {
    let mut out = Vec::new();
    for p in prime_divisors(g.order_u64()) {
        let gp = sylow_subgroup(g, p)?;
        let np = gp.intersection(g, n)?;
        let gp_grp = gp.as_group(g)?;
        let np_in_gp = Subgroup::generated(&gp_grp, np.elements())?;
        let split = crate::subgroup::complement_exists(&gp_grp, &np_in_gp)?;
        out.push((p, split));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct SplittingReport {
    pub group: String,
    pub group_order: u64,
    pub n_order: usize,
    pub subindex: String,
    pub splits: Vec<(u64, bool)>,
    pub extension_split: bool,
    pub theorem_consistent: bool,
    pub multiplicative: bool,
    pub shemetkov_applicable: bool,
    pub shemetkov_holds: bool,
}

impl SplittingReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail")
    }
}

/// Checks the main splitting theorem for one normal pair: subindex 1 iff all
/// Sylow sequences split, plus the multiplicativity lemma and the Shemetkov
/// consequence for converse counterexamples.
pub fn verify_splitting_theorem(g: &PermGroup, n: &Subgroup) -> Result<SplittingReport> {
    let classes = all_subgroups(g)?;
    let n_class = classes
        .class_of(n)
        .ok_or_else(|| Error::Internal("normal subgroup class not found".into()))?;
    let subindex = burnside_subindex(g, &classes, n_class)?;
    let splits = sylow_split_profile(g, n)?;
    let all_split = splits.iter().all(|(_, s)| *s);
    let extension_split = complement_exists_with(g, n, &classes)?;
    let theorem_consistent = (subindex == BigInt::one()) == all_split;
    // multiplicativity: subindex = product of the per-prime subindices
    // computed inside the Sylow subgroups
    let mut product = BigInt::one();
    for p in prime_divisors(g.order_u64()) {
        let gp = sylow_subgroup(g, p)?;
        let np = gp.intersection(g, n)?;
        let gp_grp = gp.as_group(g)?;
        let np_in_gp = Subgroup::generated(&gp_grp, np.elements())?;
        let p_classes = all_subgroups(&gp_grp)?;
        let ci = p_classes
            .class_of(&np_in_gp)
            .ok_or_else(|| Error::Internal("Sylow intersection class missing".into()))?;
        product *= burnside_subindex(&gp_grp, &p_classes, ci)?;
    }
    let multiplicative = product == subindex;
    let shemetkov_applicable = !extension_split && subindex == BigInt::one();
    let shemetkov_holds = if shemetkov_applicable {
        let order = g.order_u64();
        prime_divisors(order).iter().any(|p| order % p.pow(4) == 0)
    } else {
        true
    };
    Ok(SplittingReport {
        group: g.name().unwrap_or("?").to_string(),
        group_order: g.order_u64(),
        n_order: n.order(),
        subindex: subindex.to_string(),
        splits,
        extension_split,
        theorem_consistent,
        multiplicative,
        shemetkov_applicable,
        shemetkov_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::table_of_marks;
    use crate::chartab::character_table;
    use crate::named::named_group;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn iv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn char_ring(name: &str) -> MarkedRing {
        let g = named_group(name).unwrap();
        let ct = character_table(&g).unwrap();
        marked_ring_from_character_table(&ct)
    }

    fn burnside_ring(name: &str) -> MarkedRing {
        let g = named_group(name).unwrap();
        let tom = table_of_marks(&g).unwrap();
        marked_ring_from_table_of_marks(&tom)
    }

    #[test]
    fn ring_invariants() {
        for r in [
            char_ring("C2"),
            char_ring("S3"),
            char_ring("A4"),
            burnside_ring("C2"),
            burnside_ring("S3"),
            burnside_ring("Q8"),
        ] {
            r.validate().unwrap();
        }
        let g = named_group("D8").unwrap();
        let r2 = g.generators()[0].pow(2);
        let n = Subgroup::generated(&g, &[r2]).unwrap();
        let gt = crate::globalrep::global_table(&g, &n).unwrap();
        let ring = marked_ring_from_global_table(&gt);
        ring.validate().unwrap();
        // (G/N, reg_N) has mark vector (|G|, 0, ..., 0)
        let marks = ring.regular_marks().unwrap();
        assert_eq!(marks[0].as_integer(), Some(BigInt::from(8)));
        assert!(marks[1..].iter().all(|v| v.is_zero()));
    }

    #[test]
    fn c2_regular_vector() {
        let r = char_ring("C2");
        let marks = r.regular_marks().unwrap();
        assert_eq!(marks[0].as_integer(), Some(BigInt::from(2)));
        assert!(marks[1].is_zero());
    }

    #[test]
    fn sgn_has_index_one() {
        let r = char_ring("C2");
        let res = knutson_index_element(&r, &iv(&[0, 1])).unwrap();
        assert_eq!(res.value, IndexValue::Finite(BigInt::one()));
        assert_eq!(res.witness, Some(iv(&[1, 1])));
    }

    #[test]
    fn z_times_z_example() {
        // ring Z x Z with alpha the first coordinate, r = (1,0), x = (2,0)
        let ring = MarkedRing {
            labels: vec!["a".into(), "b".into()],
            marks: vec![
                vec![Cyc::from_int(1), Cyc::from_int(0)],
                vec![Cyc::from_int(0), Cyc::from_int(1)],
            ],
            conductor: 1,
            regular: iv(&[1, 0]),
        };
        ring.validate().unwrap();
        let x = iv(&[2, 0]);
        let res = knutson_index_element(&ring, &x).unwrap();
        assert_eq!(res.value, IndexValue::Finite(BigInt::from(2)));
    }

    #[test]
    fn degenerate_alpha_zero() {
        let r = char_ring("C2");
        // trivial - sgn has alpha = 0
        let res = knutson_index_element(&r, &iv(&[1, -1])).unwrap();
        assert_eq!(res.value, IndexValue::Degenerate);
    }

    #[test]
    fn ring_indices() {
        let r = char_ring("C2");
        let gens: Vec<Vec<BigInt>> = (0..2)
            .map(|i| {
                let mut v = iv(&[0, 0]);
                v[i] = BigInt::one();
                v
            })
            .collect();
        assert_eq!(knutson_index_ring(&r, &gens).unwrap(), BigInt::one());

        let s3 = char_ring("S3");
        let gens: Vec<Vec<BigInt>> = (0..3)
            .map(|i| {
                let mut v = iv(&[0, 0, 0]);
                v[i] = BigInt::one();
                v
            })
            .collect();
        assert_eq!(knutson_index_ring(&s3, &gens).unwrap(), BigInt::one());

        let q8 = burnside_ring("Q8");
        let n = q8.n();
        let gens: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                v
            })
            .collect();
        let v = knutson_index_ring(&q8, &gens).unwrap();
        assert!((&v % BigInt::from(2)).is_zero(), "K = {}", v);
    }

    #[test]
    fn subindex_with_r_is_alpha() {
        let r = char_ring("S3");
        let probes = vec![r.regular.clone()];
        let x = iv(&[1, 0, 1]); // alpha = 3
        let res = knutson_subindex(&r, &probes, &x).unwrap();
        assert_eq!(res.value, IndexValue::Finite(BigInt::from(3)));
    }

    #[test]
    fn q8_center_orbit_subindex_four() {
        let g = named_group("Q8").unwrap();
        let tom = table_of_marks(&g).unwrap();
        let ring = marked_ring_from_table_of_marks(&tom);
        // G/Z class: the unique order-2 subgroup class
        let zi = (0..tom.n())
            .position(|i| tom.classes.classes[i].rep.order() == 2)
            .unwrap();
        let n = ring.n();
        let probes: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                v
            })
            .collect();
        let mut x = vec![BigInt::zero(); n];
        x[zi] = BigInt::one();
        let res = knutson_subindex(&ring, &probes, &x).unwrap();
        assert_eq!(res.value, IndexValue::Finite(BigInt::from(4)));
        // matches the closed Burnside formula
        let classes = all_subgroups(&g).unwrap();
        assert_eq!(
            burnside_subindex(&g, &classes, zi).unwrap(),
            BigInt::from(4)
        );
    }

    #[test]
    fn burnside_subindex_examples() {
        let c2 = named_group("C2").unwrap();
        let classes = all_subgroups(&c2).unwrap();
        assert_eq!(burnside_subindex(&c2, &classes, 0).unwrap(), BigInt::one());

        let s3 = named_group("S3").unwrap();
        let classes = all_subgroups(&s3).unwrap();
        let c3 = (0..classes.len())
            .position(|i| classes.classes[i].rep.order() == 3)
            .unwrap();
        assert_eq!(burnside_subindex(&s3, &classes, c3).unwrap(), BigInt::one());
        let c2_in_s3 = (0..classes.len())
            .position(|i| classes.classes[i].rep.order() == 2)
            .unwrap();
        assert_eq!(
            burnside_subindex(&s3, &classes, c2_in_s3).unwrap(),
            BigInt::one()
        );

        let d8 = named_group("D8").unwrap();
        let classes = all_subgroups(&d8).unwrap();
        let center = d8.generators()[0].pow(2);
        let z = Subgroup::generated(&d8, &[center]).unwrap();
        let zi = classes.class_of(&z).unwrap();
        assert_eq!(burnside_subindex(&d8, &classes, zi).unwrap(), BigInt::from(2));
    }

    #[test]
    fn subindex_formula_matches_ring_subindex() {
        for name in ["S3", "D8", "Q8", "A4"] {
            let g = named_group(name).unwrap();
            let tom = table_of_marks(&g).unwrap();
            let ring = marked_ring_from_table_of_marks(&tom);
            let classes = all_subgroups(&g).unwrap();
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
                let sub = knutson_subindex(&ring, &probes, &x).unwrap();
                let formula = burnside_subindex(&g, &classes, i).unwrap();
                assert_eq!(
                    sub.value,
                    IndexValue::Finite(formula),
                    "{} class {}",
                    name,
                    i
                );
            }
        }
    }

    #[test]
    fn divisibility_chain() {
        // K_r(x) | K_r^S(x) | alpha(x) with r in S
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ring in [char_ring("S3"), char_ring("D8"), burnside_ring("D8")] {
            let n = ring.n();
            let mut probes: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); n];
                    v[i] = BigInt::one();
                    v
                })
                .collect();
            probes.push(ring.regular.clone());
            for _ in 0..20 {
                let x: Vec<BigInt> =
                    (0..n).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
                let alpha = ring.alpha(&x).unwrap();
                if alpha.is_zero() {
                    continue;
                }
                let kr = knutson_index_element(&ring, &x).unwrap();
                let krs = knutson_subindex(&ring, &probes, &x).unwrap();
                let kr = kr.value.as_int().unwrap().clone();
                let krs = krs.value.as_int().unwrap().clone();
                assert!((&krs % &kr).is_zero(), "K_r | K_r^S");
                assert!((&alpha.abs() % &krs).is_zero(), "K_r^S | alpha");
            }
        }
    }

    #[test]
    fn oracle_equivalence_small_rings() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for ring in [
            char_ring("C2"),
            char_ring("C3"),
            char_ring("C2xC2"),
            char_ring("S3"),
            burnside_ring("C2"),
            burnside_ring("C4"),
            burnside_ring("S3"),
        ] {
            let n = ring.n();
            for _ in 0..25 {
                let x: Vec<BigInt> =
                    (0..n).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
                if ring.alpha(&x).unwrap().is_zero() {
                    continue;
                }
                let hnf_m = knutson_index_element(&ring, &x)
                    .unwrap()
                    .value
                    .as_int()
                    .unwrap()
                    .clone();
                // doubling search until two consecutive levels agree
                let mut b = 3i64;
                let mut found = brute_force_index(&ring, &x, b).unwrap();
                loop {
                    let next = brute_force_index(&ring, &x, b * 2).unwrap();
                    if next == found && next.is_some() {
                        break;
                    }
                    found = next;
                    b *= 2;
                    assert!(b <= 24, "brute force failed to stabilize");
                }
                assert_eq!(found, Some(hnf_m));
            }
        }
    }

    #[test]
    fn finite_inverse_set_c2_exhaustive() {
        let ring = burnside_ring("C2");
        let s = finite_inverse_set(&ring).unwrap();
        assert!(!s.is_empty());
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let x = iv(&[a, b]);
                if ring.alpha(&x).unwrap().is_zero() {
                    continue;
                }
                let kr = knutson_index_element(&ring, &x).unwrap();
                let krs = knutson_subindex(&ring, &s, &x).unwrap();
                assert_eq!(kr.value, krs.value, "x = ({}, {})", a, b);
            }
        }
    }

    #[test]
    fn finite_inverse_set_s3_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for ring in [burnside_ring("S3"), char_ring("S3"), char_ring("D8")] {
            let s = finite_inverse_set(&ring).unwrap();
            let n = ring.n();
            for _ in 0..100 {
                let x: Vec<BigInt> =
                    (0..n).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
                if ring.alpha(&x).unwrap().is_zero() {
                    continue;
                }
                let kr = knutson_index_element(&ring, &x).unwrap();
                let krs = knutson_subindex(&ring, &s, &x).unwrap();
                assert_eq!(kr.value, krs.value);
            }
        }
    }

    #[test]
    fn sl25_has_index_above_one() {
        let ring = char_ring("SL(2,5)");
        let n = ring.n();
        let mut worst = BigInt::one();
        let mut bad_row = None;
        for i in 0..n {
            let mut x = vec![BigInt::zero(); n];
            x[i] = BigInt::one();
            let m = knutson_index_element(&ring, &x)
                .unwrap()
                .value
                .as_int()
                .unwrap()
                .clone();
            if m > worst {
                worst = m.clone();
                bad_row = Some(i);
            }
        }
        assert!(worst > BigInt::one(), "K(SL(2,5)) = {}", worst);
        // regression constant for the ring index over the irreducible rows
        let gens: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                v
            })
            .collect();
        let k = knutson_index_ring(&ring, &gens).unwrap();
        assert_eq!(k, BigInt::from(2), "K(SL(2,5))");
        let _ = bad_row;
    }

    #[test]
    fn splitting_reports() {
        let s3 = named_group("S3").unwrap();
        let c3 = sylow_subgroup(&s3, 3).unwrap();
        let rep = verify_splitting_theorem(&s3, &c3).unwrap();
        assert_eq!(rep.subindex, "1");
        assert!(rep.extension_split);
        assert!(rep.theorem_consistent);
        assert!(rep.multiplicative);

        let q8 = named_group("Q8").unwrap();
        let z = Subgroup::generated(&q8, &[q8.generators()[0].pow(2)]).unwrap();
        let rep = verify_splitting_theorem(&q8, &z).unwrap();
        assert_eq!(rep.subindex, "4");
        assert!(!rep.extension_split);
        assert_eq!(rep.splits, vec![(2, false)]);
        assert!(rep.theorem_consistent);

        let d8 = named_group("D8").unwrap();
        let z = Subgroup::generated(&d8, &[d8.generators()[0].pow(2)]).unwrap();
        let rep = verify_splitting_theorem(&d8, &z).unwrap();
        assert_eq!(rep.subindex, "2");
        assert!(rep.theorem_consistent);
        let json = rep.to_json();
        assert!(json.contains("theorem_consistent"));
    }

    #[test]
    fn sg48_33_is_the_converse_example() {
        let g = named_group("SmallGroup(48,33)").unwrap();
        let derived: Vec<_> = g.derived_elements().unwrap();
        let n = Subgroup::generated(&g, &derived).unwrap();
        assert_eq!(n.order(), 8); // Q8
        let rep = verify_splitting_theorem(&g, &n).unwrap();
        assert_eq!(rep.subindex, "1");
        assert!(!rep.extension_split, "extension must be non-split");
        assert!(rep.splits.iter().all(|(_, s)| *s), "all Sylow sequences split");
        assert!(rep.theorem_consistent);
        assert!(rep.shemetkov_applicable);
        assert!(rep.shemetkov_holds); // 2^4 | 48
    }
}
