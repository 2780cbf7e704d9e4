//! Permutations on a fixed finite domain `{0, .., n-1}`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A permutation stored as its image array: `images[i]` is where point `i` goes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from an image array, rejecting non-bijections.
    pub fn from_images(images: Vec<u16>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if (i as usize) >= n || seen[i as usize] {
                return Err(Error::Input(format!(
                    "image array {:?} is not a bijection of 0..{}",
                    images, n
                )));
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of the given degree from 1-indexed disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, Error> {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let a = cycle[w];
                let b = cycle[(w + 1) % cycle.len()];
                if a == 0 || a > degree || b == 0 || b > degree {
                    return Err(Error::Input(format!(
                        "cycle point out of range 1..={}",
                        degree
                    )));
                }
                if images[a - 1] != (a - 1) as u16 {
                    return Err(Error::Input("cycles are not disjoint".into()));
                }
                images[a - 1] = (b - 1) as u16;
            }
        }
        // from_images re-checks bijectivity, catching repeated points across cycles
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: u16) -> u16 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u16;
        }
        Perm { images }
    }

    /// `a.conjugate_by(g)` is `g a g^-1`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g * &(self * &g.inverse())
    }

    pub fn order(&self) -> u64 {
        let mut ord = 1u64;
        let mut p = self.clone();
        while !p.is_identity() {
            p = &p * self;
            ord += 1;
        }
        ord
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Re-embeds this permutation on a larger domain, acting trivially on the
    /// points at or beyond `offset + degree`.
    pub fn embed(&self, degree: usize, offset: usize) -> Perm {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        for (i, &j) in self.images.iter().enumerate() {
            images[offset + i] = (offset + j as usize) as u16;
        }
        Perm { images }
    }

    /// Disjoint cycle decomposition, 1-indexed, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                format!("({})", body.join(","))
            })
            .collect::<Vec<_>>()
            .join("")
    }
}

/// Function composition: `(a * b)(p) = a(b(p))`, i.e. `b` acts first.
impl Mul for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        let images = rhs.images.iter().map(|&p| self.images[p as usize]).collect();
        Perm { images }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_inverse() {
        let e = Perm::identity(4);
        assert!(e.is_identity());
        let r = Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap();
        assert!((&r * &r.inverse()).is_identity());
        assert_eq!(r.order(), 4);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3]).is_err());
    }

    #[test]
    fn composition_applies_rhs_first() {
        let r = Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap();
        let s = Perm::from_cycles(4, &[vec![1, 3]]).unwrap();
        let rs = &r * &s;
        // s sends 1 -> 3, then r sends 3 -> 4
        assert_eq!(rs.apply(0), 3);
    }

    #[test]
    fn cycle_round_trip() {
        let p = Perm::from_cycles(6, &[vec![1, 4], vec![2, 5, 3]]).unwrap();
        let q = Perm::from_cycles(6, &p.cycles()).unwrap();
        assert_eq!(p, q);
    }
}
