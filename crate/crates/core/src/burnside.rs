//! Marks, the table of marks, and arithmetic in the Burnside ring.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::subgroup::{all_subgroups, Subgroup, SubgroupClassList};

/// The mark [G/H, K]: the number of cosets gH with g^-1 K g contained in H.
pub fn mark(g: &PermGroup, h: &Subgroup, k: &Subgroup) -> Result<u64> {
    let elems = g.elements()?;
    let mut seen_coset = vec![false; elems.len()];
    let mut count = 0u64;
    for (xi, x) in elems.iter().enumerate() {
        if seen_coset[xi] {
            continue;
        }
        // mark the whole coset xH
        for hh in h.elements() {
            seen_coset[g.element_index(&(x * hh))?] = true;
        }
        let xinv = x.inverse();
        let fixed = k
            .elements()
            .iter()
            .all(|kk| h.contains(g, &kk.conjugate_by(&xinv)));
        if fixed {
            count += 1;
        }
    }
    Ok(count)
}

/// The table of marks: entry (i, j) = [G/H_i, H_j] over the subgroup classes
/// in their canonical (order, key) layout. Lower triangular with positive
/// diagonal.
pub struct TableOfMarks {
    pub classes: SubgroupClassList,
    pub marks: Vec<Vec<i64>>,
}

pub fn table_of_marks(g: &PermGroup) -> Result<TableOfMarks> {
    let classes = all_subgroups(g)?;
    table_of_marks_with(g, classes)
}

pub fn table_of_marks_with(g: &PermGroup, classes: SubgroupClassList) -> Result<TableOfMarks> {
    let n = classes.len();
    let mut marks = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            marks[i][j] = mark(g, &classes.classes[i].rep, &classes.classes[j].rep)? as i64;
        }
    }
    Ok(TableOfMarks { classes, marks })
}

impl TableOfMarks {
    pub fn n(&self) -> usize {
        self.marks.len()
    }

    /// GAP-style class label: subgroup order plus a letter index among the
    /// classes of that order ("1a", "2a", "2b", ...).
    pub fn class_name(&self, i: usize) -> String {
        class_label(&self.classes, i)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (0..self.n()).map(|i| self.class_name(i)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.marks {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn class_label(classes: &SubgroupClassList, i: usize) -> String {
    let order = classes.classes[i].rep.order();
    let nth = classes.classes[..i]
        .iter()
        .filter(|c| c.rep.order() == order)
        .count();
    let letter = (b'a' + (nth % 26) as u8) as char;
    if nth < 26 {
        format!("{}{}", order, letter)
    } else {
        format!("{}{}{}", order, letter, nth / 26)
    }
}

/// An element of the Burnside ring over the class basis {G/H_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideElement {
    pub coeffs: Vec<i64>,
}

impl BurnsideElement {
    pub fn basis(n: usize, i: usize) -> BurnsideElement {
        let mut coeffs = vec![0i64; n];
        coeffs[i] = 1;
        BurnsideElement { coeffs }
    }

    /// Mark vector: coefficients contracted against the rows of T(G).
    pub fn marks(&self, tom: &TableOfMarks) -> Vec<i64> {
        let n = tom.n();
        let mut v = vec![0i64; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != 0 {
                for j in 0..n {
                    v[j] += c * tom.marks[i][j];
                }
            }
        }
        v
    }
}

/// Decomposes a mark vector back into basis coefficients by back-substitution
/// against the lower-triangular marks matrix. Errors if non-integral (which
/// would indicate a bug, not bad input).
pub fn decompose_marks(tom: &TableOfMarks, v: &[i64]) -> Result<BurnsideElement> {
    let n = tom.n();
    let mut rem: Vec<i64> = v.to_vec();
    let mut coeffs = vec![0i64; n];
    for i in (0..n).rev() {
        // column i is nonzero only in rows >= i, all of which are resolved
        let diag = tom.marks[i][i];
        if rem[i] % diag != 0 {
            return Err(Error::Internal(format!(
                "non-integral Burnside decomposition at class {}",
                i
            )));
        }
        let c = rem[i] / diag;
        coeffs[i] = c;
        if c != 0 {
            for j in 0..=i {
                rem[j] -= c * tom.marks[i][j];
            }
        }
    }
    if rem.iter().any(|x| *x != 0) {
        return Err(Error::Internal("Burnside decomposition residue".into()));
    }
    Ok(BurnsideElement { coeffs })
}

/// Product in the Burnside ring: pointwise product of mark vectors, solved
/// back into the class basis.
pub fn burnside_multiply(
    tom: &TableOfMarks,
    x: &BurnsideElement,
    y: &BurnsideElement,
) -> Result<BurnsideElement> {
    let mx = x.marks(tom);
    let my = y.marks(tom);
    let prod: Vec<i64> = mx.iter().zip(&my).map(|(a, b)| a * b).collect();
    decompose_marks(tom, &prod)
}

/// Brute-force mark: build the explicit coset space of H and count the cosets
/// fixed by every element of K. Used as an oracle against [`mark`].
pub fn mark_brute_force(g: &PermGroup, h: &Subgroup, k: &Subgroup) -> Result<u64> {
    let elems = g.elements()?;
    // cosets as sorted element-index sets
    let mut coset_of = vec![usize::MAX; elems.len()];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for (xi, x) in elems.iter().enumerate() {
        if coset_of[xi] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = h
            .elements()
            .iter()
            .map(|hh| g.element_index(&(x * hh)))
            .collect::<Result<Vec<_>>>()?;
        members.sort_unstable();
        let id = cosets.len();
        for &m in &members {
            coset_of[m] = id;
        }
        cosets.push(members);
    }
    let mut fixed = 0u64;
    for coset in &cosets {
        let rep = &elems[coset[0]];
        let all_fix = k.elements().iter().all(|kk| {
            let moved = kk * rep;
            coset_of[g.element_index(&moved).unwrap()] == coset_of[coset[0]]
        });
        if all_fix {
            fixed += 1;
        }
    }
    Ok(fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::named_group;
    use crate::subgroup::normalizer;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn t_c1_and_c2() {
        let c1 = named_group("C1").unwrap();
        let t = table_of_marks(&c1).unwrap();
        assert_eq!(t.marks, vec![vec![1]]);

        let c2 = named_group("C2").unwrap();
        let t = table_of_marks(&c2).unwrap();
        assert_eq!(t.marks, vec![vec![2, 0], vec![1, 1]]);
    }

    #[test]
    fn t_d8_shape() {
        let g = named_group("D8").unwrap();
        let t = table_of_marks(&g).unwrap();
        assert_eq!(t.n(), 8);
        assert_eq!(t.marks[0][0], 8);
        assert_eq!(t.marks[7][7], 1);
        // triangularity and diagonal = |N_G(H)/H|
        for i in 0..8 {
            for j in i + 1..8 {
                assert_eq!(t.marks[i][j], 0);
            }
            let class = &t.classes.classes[i];
            assert_eq!(
                t.marks[i][i] as usize,
                class.normalizer.order() / class.rep.order()
            );
            assert_eq!(t.marks[i][0] as u64, 8 / class.rep.order() as u64);
        }
    }

    #[test]
    fn mark_examples() {
        let g = named_group("D8").unwrap();
        let r = g.generators()[0].clone();
        let s = g.generators()[1].clone();
        let hr = Subgroup::generated(&g, &[r]).unwrap();
        let hs = Subgroup::generated(&g, &[s]).unwrap();
        assert_eq!(mark(&g, &hs, &hr).unwrap(), 0);
        assert_eq!(mark(&g, &hs, &Subgroup::trivial(&g).unwrap()).unwrap(), 4);
        let n = normalizer(&g, &hs).unwrap();
        assert_eq!(mark(&g, &hs, &hs).unwrap() as usize, n.order() / hs.order());
    }

    #[test]
    fn marks_match_brute_force() {
        for name in ["S3", "D8", "Q8", "A4", "D12"] {
            let g = named_group(name).unwrap();
            let list = all_subgroups(&g).unwrap();
            for ci in &list.classes {
                for cj in &list.classes {
                    assert_eq!(
                        mark(&g, &ci.rep, &cj.rep).unwrap(),
                        mark_brute_force(&g, &ci.rep, &cj.rep).unwrap(),
                        "{}",
                        name
                    );
                }
            }
        }
    }

    #[test]
    fn s3_product_of_point_sets() {
        // G/C2 x G/C3 = G/{e} in S3
        let g = named_group("S3").unwrap();
        let t = table_of_marks(&g).unwrap();
        // classes ordered 1, C2, C3, S3
        let x = BurnsideElement::basis(4, 1);
        let y = BurnsideElement::basis(4, 2);
        let p = burnside_multiply(&t, &x, &y).unwrap();
        assert_eq!(p.coeffs, vec![1, 0, 0, 0]);
        let marks = p.marks(&t);
        assert_eq!(marks, vec![6, 0, 0, 0]);
    }

    #[test]
    fn identity_and_free_orbit_laws() {
        let g = named_group("D8").unwrap();
        let t = table_of_marks(&g).unwrap();
        let n = t.n();
        let one = BurnsideElement::basis(n, n - 1); // G/G
        let free = BurnsideElement::basis(n, 0); // G/{e}
        for i in 0..n {
            let x = BurnsideElement::basis(n, i);
            assert_eq!(burnside_multiply(&t, &x, &one).unwrap(), x);
            // G/H x G/{e} = |G/H| * G/{e}
            let p = burnside_multiply(&t, &x, &free).unwrap();
            let mut expect = vec![0i64; n];
            expect[0] = t.marks[i][0];
            assert_eq!(p.coeffs, expect);
        }
    }

    #[test]
    fn multiplication_is_marks_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["S3", "D8", "A4"] {
            let g = named_group(name).unwrap();
            let t = table_of_marks(&g).unwrap();
            let n = t.n();
            for _ in 0..200 {
                let x = BurnsideElement {
                    coeffs: (0..n).map(|_| rng.gen_range(-3i64..=3)).collect(),
                };
                let y = BurnsideElement {
                    coeffs: (0..n).map(|_| rng.gen_range(-3i64..=3)).collect(),
                };
                let p = burnside_multiply(&t, &x, &y).unwrap();
                let lhs = p.marks(&t);
                let rhs: Vec<i64> = x
                    .marks(&t)
                    .iter()
                    .zip(y.marks(&t))
                    .map(|(a, b)| a * b)
                    .collect();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let g = named_group("S3").unwrap();
        let t = table_of_marks(&g).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "1a,2a,3a,6a");
        assert_eq!(lines[1], "6,0,0,0");
        assert_eq!(lines.len(), 5);
    }
}
