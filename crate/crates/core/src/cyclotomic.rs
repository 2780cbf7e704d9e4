//! Exact arithmetic in cyclotomic fields Q(zeta_n), with elements stored as
//! rational coordinate vectors over the power basis 1, zeta, ..., zeta^{d-1}
//! reduced modulo the n-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Reduction data for one conductor, shared through a process-wide cache.
struct Basis {
    deg: usize,
    /// zeta^k in the power basis, for every k in 0..n
    powers: Vec<Vec<BigRational>>,
}

fn basis_cache() -> &'static Mutex<HashMap<u64, Arc<Basis>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Basis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of the n-th cyclotomic polynomial, ascending degree.
fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (ascending coefficients).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quo = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        // den is monic for every cyclotomic polynomial
        let c = rem[k + dd].clone();
        quo[k] = c.clone();
        for (i, dc) in den.iter().enumerate() {
            rem[k + i] -= &c * dc;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    while quo.len() > 1 && quo.last().unwrap().is_zero() {
        quo.pop();
    }
    quo
}

fn basis(n: u64) -> Arc<Basis> {
    if let Some(b) = basis_cache().lock().unwrap().get(&n) {
        return Arc::clone(b);
    }
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    let mut powers: Vec<Vec<BigRational>> = Vec::with_capacity(n as usize);
    for k in 0..n as usize {
        if k < deg {
            let mut v = vec![BigRational::zero(); deg];
            v[k] = BigRational::one();
            powers.push(v);
        } else {
            // zeta^k = zeta * zeta^{k-1}, then reduce the overflow term using
            // zeta^deg = -(phi_0 + phi_1 zeta + ... + phi_{deg-1} zeta^{deg-1})
            let prev = &powers[k - 1];
            let mut v = vec![BigRational::zero(); deg];
            for j in 0..deg - 1 {
                v[j + 1] = prev[j].clone();
            }
            let top = prev[deg - 1].clone();
            if !top.is_zero() {
                for j in 0..deg {
                    v[j] -= &top * BigRational::from(phi[j].clone());
                }
            }
            powers.push(v);
        }
    }
    let b = Arc::new(Basis { deg, powers });
    basis_cache()
        .lock()
        .unwrap()
        .insert(n, Arc::clone(&b));
    b
}

/// An element of Q(zeta_n). The conductor `n` is part of the representation;
/// values at different conductors compare equal when they agree after
/// embedding into the compositum.
#[derive(Clone)]
pub struct Cyc {
    n: u64,
    coords: Vec<BigRational>,
}

impl Cyc {
    pub fn zero() -> Cyc {
        Cyc::from_rational(BigRational::zero())
    }

    pub fn one() -> Cyc {
        Cyc::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Cyc {
        Cyc { n: 1, coords: vec![q] }
    }

    pub fn from_int(k: i64) -> Cyc {
        Cyc::from_rational(BigRational::from(BigInt::from(k)))
    }

    /// zeta_n^k
    pub fn root_of_unity(n: u64, k: u64) -> Cyc {
        assert!(n >= 1);
        let b = basis(n);
        Cyc {
            n,
            coords: b.powers[(k % n) as usize].clone(),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// Coordinates over the power basis of zeta_n, constant term first.
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Re-expresses the element at conductor m, where n | m.
    pub fn to_conductor(&self, m: u64) -> Cyc {
        if m == self.n {
            return self.clone();
        }
        assert!(m % self.n == 0, "{} does not divide {}", self.n, m);
        let b = basis(m);
        let step = (m / self.n) as usize;
        let mut coords = vec![BigRational::zero(); b.deg];
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in b.powers[j * step % m as usize].iter().enumerate() {
                coords[i] += c * p;
            }
        }
        Cyc { n: m, coords }
    }

    /// Attempts to re-express the element at conductor d, where d | n.
    /// Returns None when the element does not lie in Q(zeta_d).
    pub fn try_to_conductor(&self, d: u64) -> Option<Cyc> {
        if d == self.n {
            return Some(self.clone());
        }
        assert!(self.n % d == 0);
        let small = basis(d);
        let big = basis(self.n);
        let step = (self.n / d) as usize;
        // columns: image of zeta_d^j in the big power basis
        let mut mat: Vec<Vec<BigRational>> = Vec::with_capacity(small.deg);
        for j in 0..small.deg {
            mat.push(big.powers[j * step % self.n as usize].clone());
        }
        solve_linear(&mat, &self.coords, big.deg).map(|coords| Cyc { n: d, coords })
    }

    /// Minimal-conductor representation, scanning divisors of n upward.
    pub fn reduced(&self) -> Cyc {
        for d in 1..=self.n {
            if self.n % d == 0 {
                if let Some(c) = self.try_to_conductor(d) {
                    return c;
                }
            }
        }
        self.clone()
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        let q = self.as_rational()?;
        if q.is_integer() {
            Some(q.to_integer())
        } else {
            None
        }
    }

    /// Applies the Galois automorphism zeta_n -> zeta_n^t (t coprime to n).
    pub fn galois_conj(&self, t: u64) -> Result<Cyc> {
        if num_integer::gcd(t % self.n, self.n) != 1 {
            return Err(Error::Input(format!(
                "galois exponent {} not coprime to conductor {}",
                t, self.n
            )));
        }
        let b = basis(self.n);
        let mut coords = vec![BigRational::zero(); b.deg];
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (j as u64 * t) % self.n;
            for (i, p) in b.powers[k as usize].iter().enumerate() {
                coords[i] += c * p;
            }
        }
        Ok(Cyc { n: self.n, coords })
    }

    /// Complex conjugation, zeta -> zeta^{-1}.
    pub fn conj(&self) -> Cyc {
        if self.n == 1 {
            return self.clone();
        }
        self.galois_conj(self.n - 1).unwrap()
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let m = num_integer::lcm(self.n, other.n);
        let a = self.to_conductor(m);
        let b = other.to_conductor(m);
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        Cyc { n: m, coords }
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            n: self.n,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let m = num_integer::lcm(self.n, other.n);
        let a = self.to_conductor(m);
        let b = other.to_conductor(m);
        let bas = basis(m);
        let mut coords = vec![BigRational::zero(); bas.deg];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = x * y;
                let k = (i + j) % m as usize;
                for (l, p) in bas.powers[k].iter().enumerate() {
                    coords[l] += &prod * p;
                }
            }
        }
        Cyc { n: m, coords }
    }

    pub fn scale(&self, q: &BigRational) -> Cyc {
        Cyc {
            n: self.n,
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    /// A deterministic total order on values at a shared conductor: embeds
    /// both into the compositum and compares coordinate vectors
    /// lexicographically (constant term first).
    pub fn cmp_at_common(&self, other: &Cyc) -> std::cmp::Ordering {
        let m = num_integer::lcm(self.n, other.n);
        let a = self.to_conductor(m);
        let b = other.to_conductor(m);
        a.coords.cmp(&b.coords)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Cyc) -> bool {
        self.cmp_at_common(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Cyc {}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if let Some(q) = r.as_rational() {
            return write!(f, "{}", q);
        }
        let mut first = true;
        for (j, c) in r.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if j == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if j == 1 {
                    write!(f, "z{}", r.n)?;
                } else {
                    write!(f, "z{}^{}", r.n, j)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// serialized as {"n": conductor, "c": ["num/den", ...]} for cache files
impl serde::Serialize for Cyc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Cyc", 2)?;
        st.serialize_field("n", &self.n)?;
        let coords: Vec<String> = self.coords.iter().map(|q| q.to_string()).collect();
        st.serialize_field("c", &coords)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for Cyc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Cyc, D::Error> {
        use serde::de::Error as DeError;
        #[derive(serde::Deserialize)]
        struct Raw {
            n: u64,
            c: Vec<String>,
        }
        let raw = Raw::deserialize(d)?;
        let deg = basis(raw.n).deg;
        if raw.c.len() != deg {
            return Err(D::Error::custom(format!(
                "expected {} coordinates at conductor {}",
                deg, raw.n
            )));
        }
        let coords = raw
            .c
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Cyc { n: raw.n, coords })
    }
}

/// Solves mat^T x = target over Q by Gaussian elimination, where `mat` holds
/// the columns (each of length `rows`). Returns the coefficient vector or
/// None when the target is outside the column span.
fn solve_linear(
    cols: &[Vec<BigRational>],
    target: &[BigRational],
    rows: usize,
) -> Option<Vec<BigRational>> {
    let ncols = cols.len();
    // augmented matrix, row-major
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][col].recip();
        for x in a[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c2 in 0..=ncols {
                    let sub = &f * &a[rank][c2];
                    a[r][c2] -= sub;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    // inconsistent if any zero row has nonzero rhs
    for r in rank..rows {
        if !a[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); ncols];
    for col in 0..ncols {
        if pivot_of_col[col] != usize::MAX {
            x[col] = a[pivot_of_col[col]][ncols].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(n: u64, k: u64) -> Cyc {
        Cyc::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(
            cyclotomic_poly(1),
            vec![BigInt::from(-1), BigInt::from(1)]
        );
        assert_eq!(
            cyclotomic_poly(4),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
        assert_eq!(
            cyclotomic_poly(6),
            vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]
        );
        // Phi_12 = x^4 - x^2 + 1
        assert_eq!(
            cyclotomic_poly(12),
            [1, 0, -1, 0, 1].map(BigInt::from).to_vec()
        );
    }

    #[test]
    fn root_powers_sum_to_zero() {
        for n in [3u64, 4, 5, 6, 8, 12] {
            let mut s = Cyc::zero();
            for k in 0..n {
                s = s.add(&zeta(n, k));
            }
            assert!(s.is_zero(), "sum of all {}th roots", n);
        }
    }

    #[test]
    fn mixed_conductor_mul() {
        // zeta_3 * zeta_4 = zeta_12^7
        let p = zeta(3, 1).mul(&zeta(4, 1));
        assert_eq!(p, zeta(12, 7));
        // zeta_6 = -zeta_3^2
        assert_eq!(zeta(6, 1), zeta(3, 2).neg());
    }

    #[test]
    fn conjugation_and_norm() {
        let z = zeta(5, 1);
        let norm = z.mul(&z.conj());
        assert_eq!(norm, Cyc::one());
        // zeta_5 + conj is real; its minimal conductor is 5 still
        let real = z.add(&z.conj());
        assert_eq!(real.conj(), real);
    }

    #[test]
    fn golden_ratio_quadratic() {
        // a = zeta_5 + zeta_5^4 satisfies a^2 + a - 1 = 0
        let a = zeta(5, 1).add(&zeta(5, 4));
        let lhs = a.mul(&a).add(&a).sub(&Cyc::one());
        assert!(lhs.is_zero());
    }

    #[test]
    fn reduction_to_minimal_conductor() {
        // zeta_8^2 = i lives at conductor 4
        let i = zeta(8, 2).reduced();
        assert_eq!(i.conductor(), 4);
        assert_eq!(i, zeta(4, 1));
        // zeta_6^3 = -1 is rational
        let m1 = zeta(6, 3).reduced();
        assert_eq!(m1.as_integer(), Some(BigInt::from(-1)));
    }

    #[test]
    fn galois_orbit_of_zeta5() {
        let z = zeta(5, 1);
        let mut orbit: Vec<Cyc> = (1..5).map(|t| z.galois_conj(t).unwrap()).collect();
        orbit.dedup_by(|a, b| a == b);
        assert_eq!(orbit.len(), 4);
        assert!(z.galois_conj(5).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(format!("{}", Cyc::from_int(-3)), "-3");
        assert_eq!(format!("{}", zeta(8, 2)), "z4");
        let v = zeta(3, 1).scale(&BigRational::from(BigInt::from(2)));
        assert_eq!(format!("{}", v), "2*z3");
    }
}
