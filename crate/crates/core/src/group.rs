//! Permutation groups with a stabilizer chain for order and membership, plus
//! full element enumeration (gated by a cap) and conjugacy classes.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Default bound on full element enumeration.
pub const DEFAULT_ELEMENT_CAP: u64 = 2000;

#[derive(Clone)]
struct Level {
    base: u16,
    gens: Vec<Perm>,
    /// orbit point -> coset representative mapping `base` to that point
    transversal: HashMap<u16, Perm>,
    orbit: Vec<u16>,
}

impl Level {
    fn new(base: u16, degree: usize) -> Self {
        let mut transversal = HashMap::new();
        transversal.insert(base, Perm::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            transversal,
            orbit: vec![base],
        }
    }

    fn recompute_orbit(&mut self, degree: usize) {
        self.transversal.clear();
        self.transversal.insert(self.base, Perm::identity(degree));
        self.orbit.clear();
        self.orbit.push(self.base);
        let mut i = 0;
        while i < self.orbit.len() {
            let pt = self.orbit[i];
            i += 1;
            let rep = self.transversal[&pt].clone();
            for g in &self.gens {
                let img = g.apply(pt);
                if !self.transversal.contains_key(&img) {
                    self.transversal.insert(img, g * &rep);
                    self.orbit.push(img);
                }
            }
        }
    }
}

#[derive(Clone)]
struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    fn build(degree: usize, gens: &[Perm]) -> StabChain {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens {
            if !g.is_identity() {
                chain.insert(0, g.clone());
            }
        }
        chain
    }

    /// Sifts `g` through the chain starting at `level`; returns the residue.
    fn sift(&self, level: usize, g: &Perm) -> Perm {
        let mut h = g.clone();
        for lvl in &self.levels[level..] {
            let pt = h.apply(lvl.base);
            match lvl.transversal.get(&pt) {
                Some(rep) => h = &rep.inverse() * &h,
                None => return h,
            }
        }
        h
    }

    fn insert(&mut self, level: usize, g: Perm) {
        if g.is_identity() {
            return;
        }
        if level == self.levels.len() {
            let base = (0..self.degree as u16)
                .find(|&p| g.apply(p) != p)
                .expect("non-identity permutation moves a point");
            self.levels.push(Level::new(base, self.degree));
        }
        self.levels[level].gens.push(g);
        self.levels[level].recompute_orbit(self.degree);
        // close under Schreier generators at this level
        loop {
            let mut new_residues = Vec::new();
            {
                let lvl = &self.levels[level];
                'outer: for &pt in &lvl.orbit {
                    let rep = &lvl.transversal[&pt];
                    for s in &lvl.gens {
                        let target = &lvl.transversal[&s.apply(pt)];
                        let schreier = &target.inverse() * &(s * rep);
                        let residue = self.sift(level + 1, &schreier);
                        if !residue.is_identity() {
                            new_residues.push(residue);
                            break 'outer;
                        }
                    }
                }
            }
            if new_residues.is_empty() {
                break;
            }
            for r in new_residues {
                self.insert(level + 1, r);
            }
        }
    }

    fn order(&self) -> BigUint {
        let mut ord = BigUint::one();
        for lvl in &self.levels {
            ord *= BigUint::from(lvl.orbit.len() as u64);
        }
        ord
    }

    fn contains(&self, g: &Perm) -> bool {
        self.sift(0, g).is_identity()
    }
}

#[derive(Clone)]
struct ElementTable {
    elems: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

/// A finite group given by permutation generators.
///
/// All data is computed at construction; a built group is immutable and safe
/// to share across threads.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    gen_names: Vec<String>,
    name: Option<String>,
    chain: StabChain,
    order: BigUint,
    cap: u64,
    elements: Option<ElementTable>,
}

impl PermGroup {
    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Result<PermGroup> {
        Self::from_generators_with_cap(degree, gens, DEFAULT_ELEMENT_CAP)
    }

    pub fn from_generators_with_cap(
        degree: usize,
        gens: Vec<Perm>,
        cap: u64,
    ) -> Result<PermGroup> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::Input(format!(
                    "generator degree {} does not match group degree {}",
                    g.degree(),
                    degree
                )));
            }
        }
        let chain = StabChain::build(degree, &gens);
        let order = chain.order();
        let gen_names = (1..=gens.len()).map(|i| format!("g{}", i)).collect();
        let mut group = PermGroup {
            degree,
            generators: gens,
            gen_names,
            name: None,
            chain,
            order: order.clone(),
            cap,
            elements: None,
        };
        if order <= BigUint::from(cap) {
            group.elements = Some(group.enumerate_elements());
        }
        Ok(group)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_gen_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.generators.len() {
            return Err(Error::Input(
                "generator name count does not match generator count".into(),
            ));
        }
        self.gen_names = names;
        Ok(self)
    }

    /// Breadth-first closure of the generators; identity first, deterministic.
    fn enumerate_elements(&self) -> ElementTable {
        let mut elems = vec![Perm::identity(self.degree)];
        let mut index = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i].clone();
            i += 1;
            for g in &self.generators {
                let y = &x * g;
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
        }
        ElementTable { elems, index }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Group order as u64; only valid under the cap.
    pub fn order_u64(&self) -> u64 {
        use num_traits::ToPrimitive;
        self.order.to_u64().unwrap_or(u64::MAX)
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.chain.contains(g)
    }

    /// All elements in the canonical enumeration order (identity first).
    pub fn elements(&self) -> Result<&[Perm]> {
        match &self.elements {
            Some(t) => Ok(&t.elems),
            None => Err(Error::CapExceeded {
                order: self.order_u64(),
                cap: self.cap,
            }),
        }
    }

    /// Position of an element in the canonical enumeration order.
    pub fn element_index(&self, g: &Perm) -> Result<usize> {
        let table = self.elements.as_ref().ok_or(Error::CapExceeded {
            order: self.order_u64(),
            cap: self.cap,
        })?;
        table
            .index
            .get(g)
            .copied()
            .ok_or_else(|| Error::Input(format!("{} is not an element of the group", g)))
    }

    pub fn conjugacy_classes(&self) -> Result<ConjClasses> {
        let elems = self.elements()?;
        let n = elems.len();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let class_idx = reps.len();
            let g = &elems[i];
            let mut size = 0usize;
            for h in elems {
                let c = g.conjugate_by(h);
                let j = self.element_index(&c)?;
                if class_of[j] == usize::MAX {
                    class_of[j] = class_idx;
                    size += 1;
                }
            }
            reps.push(g.clone());
            sizes.push(size);
        }
        Ok(ConjClasses {
            reps,
            sizes,
            class_of,
        })
    }

    pub fn exponent(&self) -> Result<u64> {
        let mut e = 1u64;
        for g in self.elements()? {
            e = num_integer::lcm(e, g.order());
        }
        Ok(e)
    }

    pub fn center_elements(&self) -> Result<Vec<Perm>> {
        let elems = self.elements()?;
        let mut out = Vec::new();
        for z in elems {
            if self.generators.iter().all(|g| &(z * g) == &(g * z)) {
                out.push(z.clone());
            }
        }
        Ok(out)
    }

    pub fn derived_elements(&self) -> Result<Vec<Perm>> {
        let elems = self.elements()?;
        // closure of the set of commutators
        let mut set: Vec<Perm> = vec![Perm::identity(self.degree)];
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(set[0].clone(), ());
        for a in elems {
            for b in elems {
                let c = &(&a.inverse() * &b.inverse()) * &(a * b);
                if !seen.contains_key(&c) {
                    seen.insert(c.clone(), ());
                    set.push(c);
                }
            }
        }
        // close under multiplication
        let mut i = 0;
        while i < set.len() {
            let mut j = 0;
            while j < set.len() {
                let z = &set[i] * &set[j];
                if !seen.contains_key(&z) {
                    seen.insert(z.clone(), ());
                    set.push(z);
                }
                j += 1;
            }
            i += 1;
        }
        set.sort();
        Ok(set)
    }

    /// Content hash of the group: degree plus the sorted element set when
    /// enumerable, otherwise degree plus generators.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.degree.to_le_bytes());
        match &self.elements {
            Some(t) => {
                let mut sorted: Vec<&Perm> = t.elems.iter().collect();
                sorted.sort();
                for p in sorted {
                    for &i in p.images() {
                        hasher.update(i.to_le_bytes());
                    }
                }
            }
            None => {
                for p in &self.generators {
                    for &i in p.images() {
                        hasher.update(i.to_le_bytes());
                    }
                }
            }
        }
        hex::encode(hasher.finalize())
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(name={:?}, degree={}, order={})",
            self.name, self.degree, self.order
        )
    }
}

/// Conjugacy classes in first-occurrence order of the canonical element list;
/// the identity class comes first.
pub struct ConjClasses {
    pub reps: Vec<Perm>,
    pub sizes: Vec<usize>,
    /// element index (canonical order) -> class index
    pub class_of: Vec<usize>,
}

impl ConjClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class_of_element(&self, group: &PermGroup, g: &Perm) -> Result<usize> {
        Ok(self.class_of[group.element_index(g)?])
    }
}

/// Direct product acting on the disjoint union of the two domains.
pub fn direct_product(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    let degree = g.degree() + h.degree();
    let mut gens = Vec::new();
    let mut names = Vec::new();
    for (p, n) in g.generators().iter().zip(g.gen_names()) {
        gens.push(p.embed(degree, 0));
        names.push(format!("a_{}", n));
    }
    for (p, n) in h.generators().iter().zip(h.gen_names()) {
        gens.push(p.embed(degree, g.degree()));
        names.push(format!("b_{}", n));
    }
    let cap = g.cap().max(h.cap());
    let prod = PermGroup::from_generators_with_cap(degree, gens, cap)?.with_gen_names(names)?;
    match (g.name(), h.name()) {
        (Some(a), Some(b)) => Ok(prod.with_name(format!("{}x{}", a, b))),
        _ => Ok(prod),
    }
}

/// Parses the group definition file format:
/// `degree <n>`, one or more `gen <cycles>`, optional `name <s>`,
/// `expect-order <m>`. Unknown keys are rejected.
pub fn parse_group_file(text: &str) -> Result<PermGroup> {
    let mut degree: Option<usize> = None;
    let mut gens: Vec<Perm> = Vec::new();
    let mut name: Option<String> = None;
    let mut expect_order: Option<u64> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match key {
            "degree" => {
                degree = Some(rest.parse().map_err(|_| {
                    Error::Input(format!("line {}: bad degree '{}'", lineno + 1, rest))
                })?);
            }
            "gen" => {
                let d = degree.ok_or_else(|| {
                    Error::Input("'degree' must come before 'gen' lines".into())
                })?;
                gens.push(Perm::from_cycles(d, &parse_cycles(rest)?)?);
            }
            "name" => name = Some(rest.to_string()),
            "expect-order" => {
                expect_order = Some(rest.parse().map_err(|_| {
                    Error::Input(format!("line {}: bad expect-order '{}'", lineno + 1, rest))
                })?);
            }
            other => {
                return Err(Error::Input(format!(
                    "line {}: unknown key '{}'",
                    lineno + 1,
                    other
                )));
            }
        }
    }
    let degree = degree.ok_or_else(|| Error::Input("missing 'degree' line".into()))?;
    let mut group = PermGroup::from_generators(degree, gens)?;
    if let Some(n) = name {
        group = group.with_name(n);
    }
    if let Some(m) = expect_order {
        if group.order() != &BigUint::from(m) {
            return Err(Error::Input(format!(
                "group '{}' has order {}, expected {}",
                group.name().unwrap_or("?"),
                group.order(),
                m
            )));
        }
    }
    Ok(group)
}

/// Parses 1-indexed cycle notation like `(1,2,3)(4,5)`.
pub fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let s = s.trim();
    let mut cycles = Vec::new();
    let mut rest = s;
    if rest.is_empty() || rest == "()" {
        return Ok(cycles);
    }
    while !rest.is_empty() {
        let rest2 = rest.trim_start();
        if !rest2.starts_with('(') {
            return Err(Error::Input(format!("bad cycle notation '{}'", s)));
        }
        let close = rest2
            .find(')')
            .ok_or_else(|| Error::Input(format!("unbalanced parenthesis in '{}'", s)))?;
        let body = &rest2[1..close];
        if !body.trim().is_empty() {
            let cycle: Result<Vec<usize>> = body
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Input(format!("bad cycle point '{}'", t)))
                })
                .collect();
            cycles.push(cycle?);
        }
        rest = &rest2[close + 1..];
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d8() -> PermGroup {
        let r = Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap();
        let s = Perm::from_cycles(4, &[vec![1, 3]]).unwrap();
        PermGroup::from_generators(4, vec![r, s]).unwrap()
    }

    #[test]
    fn d8_order_eight() {
        let g = d8();
        assert_eq!(g.order_u64(), 8);
        assert_eq!(g.elements().unwrap().len(), 8);
        assert!(g.elements().unwrap()[0].is_identity());
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::from_generators(1, vec![]).unwrap();
        assert_eq!(g.order_u64(), 1);
        assert_eq!(g.elements().unwrap().len(), 1);
    }

    #[test]
    fn membership_matches_element_set() {
        let g = d8();
        let elems = g.elements().unwrap().to_vec();
        let s4: Vec<Perm> = {
            // all 24 permutations of 4 points
            let mut out = Vec::new();
            let mut idx = [0u16, 1, 2, 3];
            permute(&mut idx, 0, &mut out);
            out
        };
        for p in s4 {
            assert_eq!(g.contains(&p), elems.contains(&p));
        }
    }

    fn permute(arr: &mut [u16; 4], k: usize, out: &mut Vec<Perm>) {
        if k == 4 {
            out.push(Perm::from_images(arr.to_vec()).unwrap());
            return;
        }
        for i in k..4 {
            arr.swap(k, i);
            permute(arr, k + 1, out);
            arr.swap(k, i);
        }
    }

    #[test]
    fn d8_five_classes() {
        let g = d8();
        let cc = g.conjugacy_classes().unwrap();
        assert_eq!(cc.len(), 5);
        let mut sizes = cc.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        assert!(cc.reps[0].is_identity());
    }

    #[test]
    fn s3_classes() {
        let a = Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        let g = PermGroup::from_generators(3, vec![a, b]).unwrap();
        assert_eq!(g.order_u64(), 6);
        let cc = g.conjugacy_classes().unwrap();
        assert_eq!(cc.len(), 3);
        let mut sizes = cc.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn conjugation_stability() {
        let g = d8();
        let cc = g.conjugacy_classes().unwrap();
        let elems = g.elements().unwrap();
        for x in elems {
            for h in elems {
                let c = x.conjugate_by(h);
                assert_eq!(
                    cc.class_of_element(&g, x).unwrap(),
                    cc.class_of_element(&g, &c).unwrap()
                );
            }
        }
    }

    #[test]
    fn direct_product_order() {
        let c2 = PermGroup::from_generators(2, vec![Perm::from_cycles(2, &[vec![1, 2]]).unwrap()])
            .unwrap();
        let c3 = PermGroup::from_generators(3, vec![Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap()])
            .unwrap();
        let p = direct_product(&c2, &c3).unwrap();
        assert_eq!(p.order_u64(), 6);
        assert_eq!(p.degree(), 5);
    }

    #[test]
    fn parse_file_round_trip() {
        let text = "name D8\ndegree 4\ngen (1,2,3,4)\ngen (1,3)\nexpect-order 8\n";
        let g = parse_group_file(text).unwrap();
        assert_eq!(g.order_u64(), 8);
        assert_eq!(g.name(), Some("D8"));
    }

    #[test]
    fn parse_rejects_unknown_key() {
        assert!(parse_group_file("degree 2\nfoo bar\n").is_err());
    }

    #[test]
    fn parse_rejects_wrong_order() {
        assert!(parse_group_file("degree 4\ngen (1,2,3,4)\nexpect-order 5\n").is_err());
    }
}
