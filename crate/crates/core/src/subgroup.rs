//! Subgroups as explicit element sets, subgroup-class enumeration, quotients,
//! Sylow subgroups and complement tests.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// A subgroup of a parent group, stored as the sorted set of parent element
/// indices (the canonical key) together with the elements themselves.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    /// parent element indices, sorted ascending
    indices: Vec<usize>,
    elements: Vec<Perm>,
}

impl Subgroup {
    pub fn trivial(parent: &PermGroup) -> Result<Subgroup> {
        Subgroup::from_indices(parent, vec![0])
    }

    pub fn full(parent: &PermGroup) -> Result<Subgroup> {
        let n = parent.elements()?.len();
        Subgroup::from_indices(parent, (0..n).collect())
    }

    /// Builds a subgroup from parent element indices; the caller promises the
    /// set is closed under products (used to rehydrate stored conjugate keys).
    pub fn from_indices(parent: &PermGroup, mut indices: Vec<usize>) -> Result<Subgroup> {
        indices.sort_unstable();
        indices.dedup();
        let elems = parent.elements()?;
        let elements = indices.iter().map(|&i| elems[i].clone()).collect();
        Ok(Subgroup { indices, elements })
    }

    /// Closure of a set of parent elements.
    pub fn generated(parent: &PermGroup, gens: &[Perm]) -> Result<Subgroup> {
        let mut seen: Vec<usize> = vec![0];
        let mut in_set = vec![false; parent.elements()?.len()];
        in_set[0] = true;
        for g in gens {
            let i = parent.element_index(g)?;
            if !in_set[i] {
                in_set[i] = true;
                seen.push(i);
            }
        }
        let elems = parent.elements()?;
        let mut queue = seen.clone();
        while let Some(i) = queue.pop() {
            for g in gens {
                let y = &elems[i] * g;
                let j = parent.element_index(&y)?;
                if !in_set[j] {
                    in_set[j] = true;
                    seen.push(j);
                    queue.push(j);
                }
            }
        }
        // close under products of everything found (gens may not generate
        // transitively from every seed in one pass)
        let mut i = 0;
        while i < seen.len() {
            let mut j = 0;
            while j < seen.len() {
                let y = &elems[seen[i]] * &elems[seen[j]];
                let k = parent.element_index(&y)?;
                if !in_set[k] {
                    in_set[k] = true;
                    seen.push(k);
                }
                j += 1;
            }
            i += 1;
        }
        Subgroup::from_indices(parent, seen)
    }

    pub fn order(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn contains(&self, parent: &PermGroup, g: &Perm) -> bool {
        match parent.element_index(g) {
            Ok(i) => self.contains_index(i),
            Err(_) => false,
        }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.indices.iter().all(|i| other.contains_index(*i))
    }

    /// The conjugate g H g^-1.
    pub fn conjugate(&self, parent: &PermGroup, g: &Perm) -> Result<Subgroup> {
        let indices = self
            .elements
            .iter()
            .map(|h| parent.element_index(&h.conjugate_by(g)))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::from_indices(parent, indices)
    }

    pub fn intersection(&self, parent: &PermGroup, other: &Subgroup) -> Result<Subgroup> {
        let indices = self
            .indices
            .iter()
            .copied()
            .filter(|&i| other.contains_index(i))
            .collect();
        Subgroup::from_indices(parent, indices)
    }

    /// Realizes the subgroup as a standalone permutation group on the same
    /// domain, with a small generating set picked greedily in canonical order.
    pub fn as_group(&self, parent: &PermGroup) -> Result<PermGroup> {
        let mut gens: Vec<Perm> = Vec::new();
        let mut span = Subgroup::trivial(parent)?;
        for e in &self.elements {
            if !span.contains(parent, e) {
                gens.push(e.clone());
                span = Subgroup::generated(parent, &gens)?;
                if span.order() == self.order() {
                    break;
                }
            }
        }
        PermGroup::from_generators_with_cap(parent.degree(), gens, parent.cap())
    }
}

pub fn normalizer(parent: &PermGroup, h: &Subgroup) -> Result<Subgroup> {
    let elems = parent.elements()?;
    let mut indices = Vec::new();
    for (i, g) in elems.iter().enumerate() {
        if h.conjugate(parent, g)?.indices() == h.indices() {
            indices.push(i);
        }
    }
    Subgroup::from_indices(parent, indices)
}

pub fn is_normal(parent: &PermGroup, h: &Subgroup) -> Result<bool> {
    for g in parent.generators() {
        if h.conjugate(parent, g)?.indices() != h.indices() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Quotient by a normal subgroup, realized on the coset space, together with
/// the projection data.
pub struct Quotient {
    pub group: PermGroup,
    /// parent element index -> coset index
    coset_of: Vec<usize>,
    /// coset index -> parent element index of the canonical representative
    reps: Vec<usize>,
}

impl Quotient {
    /// Image of a parent element in the quotient group.
    pub fn project(&self, parent: &PermGroup, g: &Perm) -> Result<Perm> {
        let elems = parent.elements()?;
        let images = self
            .reps
            .iter()
            .map(|&r| {
                let moved = g * &elems[r];
                Ok(self.coset_of[parent.element_index(&moved)?] as u16)
            })
            .collect::<Result<Vec<u16>>>()?;
        Perm::from_images(images)
    }

    /// Coset index of a parent element.
    pub fn coset_index(&self, parent: &PermGroup, g: &Perm) -> Result<usize> {
        Ok(self.coset_of[parent.element_index(g)?])
    }
}

pub fn quotient_group(parent: &PermGroup, n: &Subgroup) -> Result<Quotient> {
    if !is_normal(parent, n)? {
        return Err(Error::Input("quotient by a non-normal subgroup".into()));
    }
    let elems = parent.elements()?;
    let count = elems.len();
    let mut coset_of = vec![usize::MAX; count];
    let mut reps = Vec::new();
    for i in 0..count {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        for h in n.elements() {
            let j = parent.element_index(&(&elems[i] * h))?;
            coset_of[j] = c;
        }
    }
    let mut gens = Vec::new();
    for g in parent.generators() {
        let images = reps
            .iter()
            .map(|&r| {
                let moved = g * &elems[r];
                Ok(coset_of[parent.element_index(&moved)?] as u16)
            })
            .collect::<Result<Vec<u16>>>()?;
        gens.push(Perm::from_images(images)?);
    }
    let mut group = PermGroup::from_generators_with_cap(reps.len(), gens, parent.cap())?
        .with_gen_names(parent.gen_names().to_vec())?;
    if let Some(name) = parent.name() {
        group = group.with_name(format!("{}/N{}", name, n.order()));
    }
    Ok(Quotient {
        group,
        coset_of,
        reps,
    })
}

/// One conjugacy class of subgroups.
#[derive(Clone)]
pub struct SubgroupClass {
    pub rep: Subgroup,
    pub normalizer: Subgroup,
    /// index keys of every conjugate, sorted
    pub conjugates: Vec<Vec<usize>>,
}

/// Conjugacy classes of subgroups, sorted by (order, canonical key);
/// the trivial subgroup is first and the whole group last.
#[derive(Clone)]
pub struct SubgroupClassList {
    pub classes: Vec<SubgroupClass>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl SubgroupClassList {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of an arbitrary subgroup (any conjugate).
    pub fn class_of(&self, h: &Subgroup) -> Option<usize> {
        self.lookup.get(h.indices()).copied()
    }
}

/// All subgroups of G up to conjugacy, by cyclic extension: seed with the
/// cyclic subgroups, then repeatedly adjoin prime-order normalizer elements.
/// The whole group is always included even when not reached by extension.
pub fn all_subgroups(g: &PermGroup) -> Result<SubgroupClassList> {
    let elems = g.elements()?;
    let mut classes: Vec<(Subgroup, Vec<Vec<usize>>)> = Vec::new();
    let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();

    let add_class =
        |sub: Subgroup,
         classes: &mut Vec<(Subgroup, Vec<Vec<usize>>)>,
         lookup: &mut HashMap<Vec<usize>, usize>|
         -> Result<bool> {
            if lookup.contains_key(sub.indices()) {
                return Ok(false);
            }
            let mut conj_keys: Vec<Vec<usize>> = Vec::new();
            let mut min_key: Option<Vec<usize>> = None;
            for x in g.elements()? {
                let c = sub.conjugate(g, x)?;
                let key = c.indices().to_vec();
                if !conj_keys.contains(&key) {
                    conj_keys.push(key.clone());
                }
                if min_key.as_ref().map_or(true, |m| &key < m) {
                    min_key = Some(key);
                }
            }
            conj_keys.sort();
            let rep = Subgroup::from_indices(g, min_key.unwrap())?;
            let idx = classes.len();
            for k in &conj_keys {
                lookup.insert(k.clone(), idx);
            }
            classes.push((rep, conj_keys));
            Ok(true)
        };

    // trivial subgroup, then all cyclic subgroups
    add_class(Subgroup::trivial(g)?, &mut classes, &mut lookup)?;
    for e in elems {
        let cyc = Subgroup::generated(g, std::slice::from_ref(e))?;
        add_class(cyc, &mut classes, &mut lookup)?;
    }

    // cyclic extension: adjoin normalizer elements of prime order modulo H,
    // i.e. x with x^p in H for the least such exponent p, so that the
    // extension has order p * |H|
    let mut queue: Vec<usize> = (0..classes.len()).collect();
    while let Some(ci) = queue.pop() {
        let rep = classes[ci].0.clone();
        let norm = normalizer(g, &rep)?;
        for ni in norm.indices() {
            let x = &elems[*ni];
            if rep.contains_index(*ni) {
                continue;
            }
            let ord = x.order();
            let mod_order = (1..=ord)
                .find(|k| {
                    ord % k == 0 && rep.contains_index(g.element_index(&x.pow(*k as i64)).unwrap())
                })
                .unwrap();
            if !is_prime_u64(mod_order) {
                continue;
            }
            let mut gens: Vec<Perm> = rep.elements().to_vec();
            gens.push(x.clone());
            let ext = Subgroup::generated(g, &gens)?;
            if add_class(ext, &mut classes, &mut lookup)? {
                queue.push(classes.len() - 1);
            }
        }
    }

    // non-solvable groups are not reached by prime-cyclic extension
    add_class(Subgroup::full(g)?, &mut classes, &mut lookup)?;

    // deterministic order: by size, then by canonical key of the representative
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&a, &b| {
        let (sa, sb) = (&classes[a].0, &classes[b].0);
        sa.order()
            .cmp(&sb.order())
            .then_with(|| sa.indices().cmp(sb.indices()))
    });
    let mut out = Vec::new();
    let mut new_lookup = HashMap::new();
    for (new_idx, &old_idx) in order.iter().enumerate() {
        let (rep, conjugates) = &classes[old_idx];
        for k in conjugates {
            new_lookup.insert(k.clone(), new_idx);
        }
        out.push(SubgroupClass {
            normalizer: normalizer(g, rep)?,
            rep: rep.clone(),
            conjugates: conjugates.clone(),
        });
    }
    Ok(SubgroupClassList {
        classes: out,
        lookup: new_lookup,
    })
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The p-part of n as (p^a, a).
fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n % p == 0 {
        part *= p;
        n /= p;
    }
    part
}

/// A Sylow p-subgroup, grown by adjoining p-power-order normalizer elements.
pub fn sylow_subgroup(g: &PermGroup, p: u64) -> Result<Subgroup> {
    if !is_prime_u64(p) {
        return Err(Error::Input(format!("{} is not prime", p)));
    }
    let target = p_part(g.order_u64(), p);
    let mut current = Subgroup::trivial(g)?;
    let elems = g.elements()?;
    while (current.order() as u64) < target {
        let norm = normalizer(g, &current)?;
        let grow = norm
            .indices()
            .iter()
            .map(|&i| &elems[i])
            .find(|x| {
                !current.contains(g, x) && {
                    let o = x.order();
                    o > 1 && is_p_power(o, p)
                }
            })
            .ok_or_else(|| Error::Internal("sylow growth stalled".into()))?;
        let mut gens: Vec<Perm> = current.elements().to_vec();
        gens.push(grow.clone());
        current = Subgroup::generated(g, &gens)?;
    }
    Ok(current)
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Whether the extension 1 -> N -> G -> G/N -> 1 splits, i.e. some subgroup
/// K has |K||N| = |G| and trivial intersection with N.
pub fn complement_exists_with(
    g: &PermGroup,
    n: &Subgroup,
    classes: &SubgroupClassList,
) -> Result<bool> {
    if !is_normal(g, n)? {
        return Err(Error::Input("complement test needs a normal subgroup".into()));
    }
    let target = g.elements()?.len() / n.order();
    for class in &classes.classes {
        if class.rep.order() != target {
            continue;
        }
        for key in &class.conjugates {
            let count = key.iter().filter(|i| n.contains_index(**i)).count();
            if count == 1 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

pub fn complement_exists(g: &PermGroup, n: &Subgroup) -> Result<bool> {
    let classes = all_subgroups(g)?;
    complement_exists_with(g, n, &classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::named_group;

    #[test]
    fn s3_four_classes() {
        let g = named_group("S3").unwrap();
        let list = all_subgroups(&g).unwrap();
        assert_eq!(list.len(), 4);
        let orders: Vec<usize> = list.classes.iter().map(|c| c.rep.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert_eq!(list.classes[1].conjugates.len(), 3);
    }

    #[test]
    fn d8_classes_and_brute_force() {
        let g = named_group("D8").unwrap();
        let list = all_subgroups(&g).unwrap();
        assert_eq!(list.len(), 8);
        // brute force over all subsets of the 8 elements
        let elems = g.elements().unwrap().to_vec();
        let mut count = 0usize;
        for mask in 0u32..256 {
            if mask & 1 == 0 {
                continue;
            }
            let subset: Vec<usize> = (0..8).filter(|i| mask >> i & 1 == 1).collect();
            let closed = subset.iter().all(|&i| {
                subset.iter().all(|&j| {
                    let p = &elems[i] * &elems[j];
                    subset.contains(&g.element_index(&p).unwrap())
                })
            });
            if closed {
                count += 1;
            }
        }
        let total: usize = list.classes.iter().map(|c| c.conjugates.len()).sum();
        assert_eq!(total, count);
    }

    #[test]
    fn normalizer_of_reflection_in_d8() {
        let g = named_group("D8").unwrap();
        let s = g.generators()[1].clone();
        let h = Subgroup::generated(&g, &[s]).unwrap();
        let n = normalizer(&g, &h).unwrap();
        assert_eq!(n.order(), 4);
    }

    #[test]
    fn quotient_d8_by_center() {
        let g = named_group("D8").unwrap();
        let r2 = g.generators()[0].pow(2);
        let n = Subgroup::generated(&g, &[r2]).unwrap();
        let q = quotient_group(&g, &n).unwrap();
        assert_eq!(q.group.order_u64(), 4);
        assert_eq!(q.group.exponent().unwrap(), 2);
    }

    #[test]
    fn quotient_q8_by_center() {
        let g = named_group("Q8").unwrap();
        let center = Subgroup::from_indices(
            &g,
            g.center_elements()
                .unwrap()
                .iter()
                .map(|z| g.element_index(z).unwrap())
                .collect(),
        )
        .unwrap();
        assert_eq!(center.order(), 2);
        let q = quotient_group(&g, &center).unwrap();
        assert_eq!(q.group.order_u64(), 4);
        assert_eq!(q.group.exponent().unwrap(), 2);
    }

    #[test]
    fn sylow_subgroups() {
        let g = named_group("S3").unwrap();
        assert_eq!(sylow_subgroup(&g, 2).unwrap().order(), 2);
        assert_eq!(sylow_subgroup(&g, 3).unwrap().order(), 3);
        let d8 = named_group("D8").unwrap();
        assert_eq!(sylow_subgroup(&d8, 5).unwrap().order(), 1);
        let big = named_group("SmallGroup(48,33)").unwrap();
        assert_eq!(sylow_subgroup(&big, 2).unwrap().order(), 16);
        assert_eq!(sylow_subgroup(&big, 3).unwrap().order(), 3);
    }

    #[test]
    fn complements() {
        let s3 = named_group("S3").unwrap();
        let c3 = sylow_subgroup(&s3, 3).unwrap();
        assert!(complement_exists(&s3, &c3).unwrap());

        let q8 = named_group("Q8").unwrap();
        let z = Subgroup::generated(&q8, &[q8.generators()[0].pow(2)]).unwrap();
        assert_eq!(z.order(), 2);
        assert!(!complement_exists(&q8, &z).unwrap());
    }

    #[test]
    fn intersection_of_reflections_in_s3() {
        let g = named_group("S3").unwrap();
        let list = all_subgroups(&g).unwrap();
        let c2_class = &list.classes[1];
        let a = Subgroup::from_indices(&g, c2_class.conjugates[0].clone()).unwrap();
        let b = Subgroup::from_indices(&g, c2_class.conjugates[1].clone()).unwrap();
        assert_eq!(a.intersection(&g, &b).unwrap().order(), 1);
        assert_eq!(a.intersection(&g, &a).unwrap().indices(), a.indices());
    }

    #[test]
    fn conjugate_counts_match_normalizer_index() {
        let g = named_group("D8").unwrap();
        let list = all_subgroups(&g).unwrap();
        for class in &list.classes {
            assert_eq!(
                class.conjugates.len(),
                g.elements().unwrap().len() / class.normalizer.order()
            );
        }
    }
}
