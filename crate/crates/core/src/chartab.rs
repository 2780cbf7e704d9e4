//! Exact character tables by Dixon's method: split the class algebra over a
//! suitable prime field, then lift the modular values to cyclotomic integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::group::{ConjClasses, PermGroup};
use crate::perm::Perm;

const PRIME_SEARCH_BOUND: u64 = 1_000_000;

/// The table of irreducible characters of a group: `rows[i][j]` is the value
/// of the i-th irreducible on the j-th conjugacy class (classes in
/// [`ConjClasses`] order). The trivial character is row 0, remaining rows by
/// ascending degree with value-vector ties broken lexicographically.
pub struct CharacterTable {
    pub group_hash: String,
    pub classes: ConjClasses,
    pub rows: Vec<Vec<Cyc>>,
    pub degrees: Vec<u64>,
    /// exponent of the group; every value lives in Q(zeta_conductor)
    pub conductor: u64,
}

impl CharacterTable {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> ClassFunction {
        ClassFunction {
            group_hash: self.group_hash.clone(),
            values: self.rows[i].clone(),
        }
    }

    /// Deterministic comparison key of a value row: coordinates at the table
    /// conductor, constant term first, concatenated over the classes.
    pub fn row_key(values: &[Cyc], conductor: u64) -> Vec<BigRational> {
        values
            .iter()
            .flat_map(|v| v.to_conductor(conductor).coords().to_vec())
            .collect()
    }
}

/// A class function: one cyclotomic value per conjugacy class of its group.
#[derive(Clone, PartialEq, Eq)]
pub struct ClassFunction {
    pub group_hash: String,
    pub values: Vec<Cyc>,
}

impl ClassFunction {
    fn check_same_group(&self, other: &ClassFunction) -> Result<()> {
        if self.group_hash != other.group_hash {
            return Err(Error::Input(
                "class functions belong to different groups".into(),
            ));
        }
        Ok(())
    }
}

/// The regular character: |G| at the identity class, zero elsewhere.
pub fn regular_character(g: &PermGroup) -> Result<ClassFunction> {
    let classes = g.conjugacy_classes()?;
    let mut values = vec![Cyc::zero(); classes.len()];
    values[0] = Cyc::from_int(g.order_u64() as i64);
    Ok(ClassFunction {
        group_hash: g.content_hash(),
        values,
    })
}

/// Pointwise product of two class functions on the same group.
pub fn tensor(a: &ClassFunction, b: &ClassFunction) -> Result<ClassFunction> {
    a.check_same_group(b)?;
    if a.values.len() != b.values.len() {
        return Err(Error::Input("class function length mismatch".into()));
    }
    Ok(ClassFunction {
        group_hash: a.group_hash.clone(),
        values: a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| x.mul(y))
            .collect(),
    })
}

/// <a, b> = (1/|G|) sum over classes of |c| a(c) conj(b(c)).
pub fn inner_product(g: &PermGroup, a: &ClassFunction, b: &ClassFunction) -> Result<Cyc> {
    a.check_same_group(b)?;
    let classes = g.conjugacy_classes()?;
    let mut s = Cyc::zero();
    for (c, size) in classes.sizes.iter().enumerate() {
        let term = a.values[c]
            .mul(&b.values[c].conj())
            .scale(&BigRational::from(BigInt::from(*size)));
        s = s.add(&term);
    }
    let inv = BigRational::new(BigInt::one(), BigInt::from(g.order_u64()));
    Ok(s.scale(&inv))
}

/// Restriction of a class function on `g` to the subgroup realized by `h`
/// (same permutation domain, elements of `h` contained in `g`).
pub fn restrict(g: &PermGroup, chi: &ClassFunction, h: &PermGroup) -> Result<ClassFunction> {
    if chi.group_hash != g.content_hash() {
        return Err(Error::Input("class function not on the given group".into()));
    }
    let g_classes = g.conjugacy_classes()?;
    let h_classes = h.conjugacy_classes()?;
    let values = h_classes
        .reps
        .iter()
        .map(|rep| {
            let gi = g_classes.class_of_element(g, rep)?;
            Ok(chi.values[gi].clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassFunction {
        group_hash: h.content_hash(),
        values,
    })
}

/// Induction of a class function from the subgroup realized by `h` up to `g`:
/// psi^G(n) = (1/|H|) * sum over x in G of psi0(x^-1 n x), psi0 zero off H.
pub fn induce(g: &PermGroup, h: &PermGroup, psi: &ClassFunction) -> Result<ClassFunction> {
    if psi.group_hash != h.content_hash() {
        return Err(Error::Input("class function not on the subgroup".into()));
    }
    let g_classes = g.conjugacy_classes()?;
    let h_classes = h.conjugacy_classes()?;
    let inv_h = BigRational::new(BigInt::one(), BigInt::from(h.order_u64()));
    let mut values = Vec::with_capacity(g_classes.len());
    for rep in &g_classes.reps {
        let mut s = Cyc::zero();
        for x in g.elements()? {
            let conj = rep.conjugate_by(&x.inverse());
            if let Ok(hc) = h_classes.class_of_element(h, &conj) {
                s = s.add(&psi.values[hc]);
            }
        }
        values.push(s.scale(&inv_h));
    }
    Ok(ClassFunction {
        group_hash: g.content_hash(),
        values,
    })
}

// ---------------------------------------------------------------------------
// Dixon's algorithm
// ---------------------------------------------------------------------------

struct ModP {
    p: u64,
}

impl ModP {
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }
    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime p = 1 (mod m) with p > 2 sqrt(order).
fn dixon_prime(m: u64, order: u64) -> Result<u64> {
    let bound = (2.0 * (order as f64).sqrt()).ceil() as u64;
    let mut p = m + 1;
    while p < PRIME_SEARCH_BOUND {
        if p > bound && is_prime(p) {
            return Ok(p);
        }
        p += m;
    }
    Err(Error::Config(format!(
        "no prime p = 1 mod {} below {}",
        m, PRIME_SEARCH_BOUND
    )))
}

/// Row-reduces a basis (rows spanning a subspace of F_p^k) into rref; returns
/// (rref rows, pivot columns).
fn rref(modp: &ModP, mut rows: Vec<Vec<u64>>) -> (Vec<Vec<u64>>, Vec<usize>) {
    let k = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = modp.inv(rows[r][col]);
        for c in 0..k {
            rows[r][c] = modp.mul(rows[r][c], inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..k {
                    let sub = modp.mul(f, rows[r][c]);
                    rows[i][c] = modp.sub(rows[i][c], sub);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Determinant of a square matrix mod p.
fn det_mod(modp: &ModP, mut a: Vec<Vec<u64>>) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&i| a[i][col] != 0) else {
            return 0;
        };
        if pr != col {
            a.swap(col, pr);
            det = modp.sub(0, det);
        }
        det = modp.mul(det, a[col][col]);
        let inv = modp.inv(a[col][col]);
        for i in col + 1..n {
            if a[i][col] != 0 {
                let f = modp.mul(a[i][col], inv);
                for c in col..n {
                    let sub = modp.mul(f, a[col][c]);
                    a[i][c] = modp.sub(a[i][c], sub);
                }
            }
        }
    }
    det
}

/// Characteristic polynomial of a d x d matrix mod p by interpolation,
/// coefficients ascending. Requires p > d.
fn char_poly(modp: &ModP, a: &[Vec<u64>]) -> Vec<u64> {
    let d = a.len();
    // evaluate det(xI - A) at x = 0..d
    let mut xs = Vec::with_capacity(d + 1);
    let mut ys = Vec::with_capacity(d + 1);
    for x in 0..=d as u64 {
        let m: Vec<Vec<u64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let diag = if i == j { x } else { 0 };
                        modp.sub(diag, a[i][j])
                    })
                    .collect()
            })
            .collect();
        xs.push(x);
        ys.push(det_mod(modp, m));
    }
    // Lagrange interpolation
    let mut poly = vec![0u64; d + 1];
    for i in 0..=d {
        // basis polynomial prod_{j!=i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![0u64; d + 1];
        basis[0] = 1;
        let mut deg = 0;
        let mut denom = 1u64;
        for j in 0..=d {
            if j == i {
                continue;
            }
            denom = modp.mul(denom, modp.sub(xs[i], xs[j]));
            // multiply basis by (x - x_j)
            for c in (0..=deg).rev() {
                let t = basis[c];
                basis[c + 1] = modp.add(basis[c + 1], t);
                basis[c] = modp.mul(t, modp.sub(0, xs[j]));
            }
            deg += 1;
        }
        let f = modp.mul(ys[i], modp.inv(denom));
        for c in 0..=d {
            poly[c] = modp.add(poly[c], modp.mul(f, basis[c]));
        }
    }
    poly
}

fn poly_eval(modp: &ModP, poly: &[u64], x: u64) -> u64 {
    let mut acc = 0u64;
    for &c in poly.iter().rev() {
        acc = modp.add(modp.mul(acc, x), c);
    }
    acc
}

/// Computes the character table of G exactly.
pub fn character_table(g: &PermGroup) -> Result<CharacterTable> {
    let classes = g.conjugacy_classes()?;
    let k = classes.len();
    let order = g.order_u64();
    let m = g.exponent()?;
    let group_hash = g.content_hash();
    if k == 1 {
        return Ok(CharacterTable {
            group_hash,
            classes,
            rows: vec![vec![Cyc::one()]],
            degrees: vec![1],
            conductor: 1,
        });
    }
    let elems = g.elements()?;
    let class_elems: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new(); k];
        for (i, &c) in classes.class_of.iter().enumerate() {
            v[c].push(i);
        }
        v
    };
    let class_of_perm = |x: &Perm| -> Result<usize> { Ok(classes.class_of[g.element_index(x)?]) };
    // class of g_l^t for every class l and exponent t
    let power_class: Vec<Vec<usize>> = classes
        .reps
        .iter()
        .map(|rep| {
            (0..m)
                .map(|t| class_of_perm(&rep.pow(t as i64)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let inverse_class: Vec<usize> = classes
        .reps
        .iter()
        .map(|rep| class_of_perm(&rep.inverse()))
        .collect::<Result<Vec<_>>>()?;

    let p = dixon_prime(m, order)?;
    let modp = ModP { p };

    // structure constants: a[i][j][l] = #{x in C_i : x^-1 z_l in C_j}
    // stored as the class matrices M_i with (M_i)_{j,l} = a_{ijl}
    let mut class_mats: Vec<Vec<Vec<u64>>> = vec![vec![vec![0u64; k]; k]; k];
    for i in 0..k {
        for l in 0..k {
            let z = &classes.reps[l];
            for &xi in &class_elems[i] {
                let y = &elems[xi].inverse() * z;
                let j = class_of_perm(&y)?;
                class_mats[i][j][l] += 1;
            }
        }
    }

    // split F_p^k into common eigenspaces of the class matrices
    let mut spaces: Vec<(Vec<Vec<u64>>, Vec<usize>)> = {
        let idk: Vec<Vec<u64>> = (0..k)
            .map(|i| {
                let mut r = vec![0u64; k];
                r[i] = 1;
                r
            })
            .collect();
        vec![rref(&modp, idk)]
    };
    for mat in &class_mats {
        if spaces.iter().all(|(b, _)| b.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for (basis_rows, pivots) in spaces {
            let d = basis_rows.len();
            if d == 1 {
                next.push((basis_rows, pivots));
                continue;
            }
            // restriction of mat to the subspace, in basis coordinates:
            // (mat * b_r) has coordinates read off at the pivot columns
            // because the basis is in rref
            let mut restr = vec![vec![0u64; d]; d];
            for (r, b) in basis_rows.iter().enumerate() {
                let mut img = vec![0u64; k];
                for (row, mrow) in mat.iter().enumerate() {
                    let mut s = 0u64;
                    for c in 0..k {
                        s = modp.add(s, modp.mul(mrow[c], b[c]));
                    }
                    img[row] = s;
                }
                for (c, &pc) in pivots.iter().enumerate() {
                    restr[c][r] = img[pc];
                }
            }
            // the characteristic polynomial lets us skip non-eigenvalues
            // cheaply; interpolation needs p > d, which holds whenever
            // p > number of classes (true for the supported corpus)
            let poly = if (d as u64) < p {
                Some(char_poly(&modp, &restr))
            } else {
                None
            };
            let mut found = 0usize;
            for lam in 0..p {
                if found == d {
                    break;
                }
                if let Some(poly) = &poly {
                    if poly_eval(&modp, poly, lam) != 0 {
                        continue;
                    }
                }
                // eigenspace of lam, in basis coordinates; it must stay one
                // subspace so that later class matrices can split it further
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let diag = if i == j { lam } else { 0 };
                                modp.sub(restr[i][j], diag)
                            })
                            .collect()
                    })
                    .collect();
                let eig = kernel_basis(&modp, &shifted);
                if eig.is_empty() {
                    continue;
                }
                let global: Vec<Vec<u64>> = eig
                    .iter()
                    .map(|v| {
                        let mut w = vec![0u64; k];
                        for (r, &cv) in v.iter().enumerate() {
                            for c in 0..k {
                                w[c] = modp.add(w[c], modp.mul(cv, basis_rows[r][c]));
                            }
                        }
                        w
                    })
                    .collect();
                found += global.len();
                next.push(rref(&modp, global));
            }
            if found != d {
                return Err(Error::Internal(
                    "class matrix eigenspaces do not fill the subspace".into(),
                ));
            }
        }
        spaces = next;
    }
    if spaces.len() != k || spaces.iter().any(|(b, _)| b.len() != 1) {
        return Err(Error::Internal(format!(
            "class algebra split into {} spaces, expected {}",
            spaces.len(),
            k
        )));
    }

    // primitive m-th root of unity mod p
    let gen = (2..p)
        .find(|&c| {
            // c generates F_p^* iff c^((p-1)/q) != 1 for every prime q | p-1
            prime_factors(p - 1)
                .into_iter()
                .all(|q| modp.pow(c, (p - 1) / q) != 1)
        })
        .ok_or_else(|| Error::Internal("no primitive root mod p".into()))?;
    let z = modp.pow(gen, (p - 1) / m);
    let z_pows: Vec<u64> = (0..m).map(|j| modp.pow(z, j)).collect();

    let mut rows: Vec<(u64, Vec<Cyc>)> = Vec::with_capacity(k);
    for (basis_rows, _) in &spaces {
        let w_raw = &basis_rows[0];
        // normalize so that the identity-class entry is 1
        if w_raw[0] == 0 {
            return Err(Error::Internal("eigenvector vanishes at identity".into()));
        }
        let scale = modp.inv(w_raw[0]);
        let w: Vec<u64> = w_raw.iter().map(|&x| modp.mul(x, scale)).collect();
        // degree: chi(1)^2 = |G| / sum_l w_l w_{l~} / |C_l|
        let mut s = 0u64;
        for l in 0..k {
            let t = modp.mul(w[l], w[inverse_class[l]]);
            s = modp.add(s, modp.mul(t, modp.inv(classes.sizes[l] as u64 % p)));
        }
        let d2 = modp.mul(order % p, modp.inv(s));
        let deg = (1..p)
            .find(|&x| x < p.div_ceil(2) && modp.mul(x, x) == d2)
            .ok_or_else(|| Error::Internal("no square root for degree".into()))?;
        // modular character values chi(g_l) = deg * w_l / |C_l|
        let chi_mod: Vec<u64> = (0..k)
            .map(|l| modp.mul(modp.mul(deg, w[l]), modp.inv(classes.sizes[l] as u64 % p)))
            .collect();
        // lift: chi(g_l) = sum_j m_j zeta_m^j with
        // m_j = (1/m) sum_t chi(g_l^t) z^{-jt}
        let inv_m = modp.inv(m % p);
        let mut values = Vec::with_capacity(k);
        for l in 0..k {
            let mut val = Cyc::zero();
            for j in 0..m {
                let mut acc = 0u64;
                for t in 0..m {
                    let zmjt = modp.inv(z_pows[(j * t % m) as usize]);
                    acc = modp.add(acc, modp.mul(chi_mod[power_class[l][t as usize]], zmjt));
                }
                let mj = modp.mul(acc, inv_m);
                if mj != 0 {
                    if mj > deg {
                        return Err(Error::Internal("lifted multiplicity too large".into()));
                    }
                    let term = Cyc::root_of_unity(m, j)
                        .scale(&BigRational::from(BigInt::from(mj)));
                    val = val.add(&term);
                }
            }
            values.push(val);
        }
        if values[0].as_integer() != Some(BigInt::from(deg)) {
            return Err(Error::Internal("lifted degree mismatch".into()));
        }
        rows.push((deg, values));
    }

    // trivial character first, then ascending degree, ties by value key
    rows.sort_by(|a, b| {
        let a_triv = a.1.iter().all(|v| v == &Cyc::one());
        let b_triv = b.1.iter().all(|v| v == &Cyc::one());
        b_triv
            .cmp(&a_triv)
            .then(a.0.cmp(&b.0))
            .then_with(|| CharacterTable::row_key(&a.1, m).cmp(&CharacterTable::row_key(&b.1, m)))
    });
    let degrees = rows.iter().map(|(d, _)| *d).collect();
    Ok(CharacterTable {
        group_hash,
        classes,
        rows: rows.into_iter().map(|(_, v)| v).collect(),
        degrees,
        conductor: m,
    })
}

/// Basis of the kernel of a square matrix mod p (column vectors).
fn kernel_basis(modp: &ModP, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let d = a.len();
    let (r, pivots) = rref(modp, a.to_vec());
    let mut basis = Vec::new();
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; d];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    for free in 0..d {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![0u64; d];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = modp.sub(0, r[row][free]);
        }
        basis.push(v);
    }
    basis
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

// ---------------------------------------------------------------------------
// Cache serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TableFile {
    group_hash: String,
    conductor: u64,
    class_sizes: Vec<usize>,
    class_reps: Vec<Vec<u16>>,
    class_of: Vec<usize>,
    degrees: Vec<u64>,
    rows: Vec<Vec<Cyc>>,
}

impl CharacterTable {
    pub fn to_json(&self) -> String {
        let file = TableFile {
            group_hash: self.group_hash.clone(),
            conductor: self.conductor,
            class_sizes: self.classes.sizes.clone(),
            class_reps: self
                .classes
                .reps
                .iter()
                .map(|r| r.images().to_vec())
                .collect(),
            class_of: self.classes.class_of.clone(),
            degrees: self.degrees.clone(),
            rows: self.rows.clone(),
        };
        serde_json::to_string(&file).expect("serialization cannot fail")
    }

    pub fn from_json(s: &str, expected_hash: &str) -> Result<CharacterTable> {
        let file: TableFile =
            serde_json::from_str(s).map_err(|e| Error::Input(format!("bad table cache: {}", e)))?;
        if file.group_hash != expected_hash {
            return Err(Error::Input("table cache is for a different group".into()));
        }
        let reps = file
            .class_reps
            .into_iter()
            .map(Perm::from_images)
            .collect::<Result<Vec<_>>>()?;
        Ok(CharacterTable {
            group_hash: file.group_hash,
            classes: ConjClasses {
                reps,
                sizes: file.class_sizes,
                class_of: file.class_of,
            },
            rows: file.rows,
            degrees: file.degrees,
            conductor: file.conductor,
        })
    }
}
