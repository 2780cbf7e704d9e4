//! Canonical forms of character tables, tables of marks, and global tables,
//! invariant under relabeling of the underlying group. Canonicalization uses
//! individualization-refinement over the row/column (and block) structure and
//! returns the lexicographically least representative over all leaves.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::burnside::TableOfMarks;
use crate::chartab::{character_table, CharacterTable};
use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::globalrep::GlobalTable;
use crate::group::PermGroup;

const NODE_BUDGET: usize = 1_000_000;

/// A canonicalized table: attribute vectors and entries are in canonical
/// order, so two tables are isomorphic (as labeled matrices) iff their
/// canonical forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalTable {
    pub row_attrs: Vec<String>,
    pub col_attrs: Vec<String>,
    /// block id per row / per column, empty when the table has no block
    /// structure
    pub row_groups: Vec<usize>,
    pub col_groups: Vec<usize>,
    pub entries: Vec<Vec<String>>,
}

impl CanonicalTable {
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("serialization cannot fail");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

// ---------------------------------------------------------------------------
// Individualization-refinement engine
// ---------------------------------------------------------------------------

type Id = u32;

struct Instance {
    n_rows: usize,
    n_cols: usize,
    n_blocks: usize,
    entries: Vec<Vec<Id>>,
    row_attr: Vec<Id>,
    col_attr: Vec<Id>,
    block_attr: Vec<Id>,
    row_block: Vec<usize>,
    col_block: Vec<usize>,
    /// square table with rows and columns permuted by the same permutation
    sync: bool,
}

#[derive(Clone)]
struct Parts {
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
    blocks: Vec<Vec<usize>>,
}

fn class_of(partition: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut out = vec![0usize; n];
    for (ci, class) in partition.iter().enumerate() {
        for &x in class {
            out[x] = ci;
        }
    }
    out
}

/// Splits every class of `partition` by the signature function, ordering the
/// subclasses by signature. Returns true if anything split.
fn split_by<S: Ord>(partition: &mut Vec<Vec<usize>>, sig: impl Fn(usize) -> S) -> bool {
    let mut changed = false;
    let mut next: Vec<Vec<usize>> = Vec::with_capacity(partition.len());
    for class in partition.iter() {
        if class.len() == 1 {
            next.push(class.clone());
            continue;
        }
        let mut keyed: Vec<(S, usize)> = class.iter().map(|&x| (sig(x), x)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let mut current: Vec<usize> = vec![keyed[0].1];
        for w in keyed.windows(2) {
            if w[0].0 == w[1].0 {
                current.push(w[1].1);
            } else {
                next.push(std::mem::take(&mut current));
                current.push(w[1].1);
                changed = true;
            }
        }
        next.push(current);
    }
    *partition = next;
    changed
}

impl Instance {
    fn refine(&self, parts: &mut Parts) {
        loop {
            let mut changed = false;
            if self.sync {
                // one partition drives both sides
                let cls = class_of(&parts.rows, self.n_rows);
                let ncls = parts.rows.len();
                changed |= split_by(&mut parts.rows, |i| {
                    let mut row_sig: Vec<Vec<Id>> = vec![Vec::new(); ncls];
                    let mut col_sig: Vec<Vec<Id>> = vec![Vec::new(); ncls];
                    for j in 0..self.n_cols {
                        row_sig[cls[j]].push(self.entries[i][j]);
                        col_sig[cls[j]].push(self.entries[j][i]);
                    }
                    for v in row_sig.iter_mut().chain(col_sig.iter_mut()) {
                        v.sort_unstable();
                    }
                    (self.row_attr[i], row_sig, col_sig)
                });
                parts.cols = parts.rows.clone();
            } else {
                let col_cls = class_of(&parts.cols, self.n_cols);
                let block_cls = class_of(&parts.blocks, self.n_blocks);
                changed |= split_by(&mut parts.rows, |i| {
                    let mut sig: Vec<Vec<Id>> = vec![Vec::new(); parts.cols.len()];
                    for j in 0..self.n_cols {
                        sig[col_cls[j]].push(self.entries[i][j]);
                    }
                    for v in sig.iter_mut() {
                        v.sort_unstable();
                    }
                    let blk = if self.n_blocks > 0 {
                        block_cls[self.row_block[i]]
                    } else {
                        0
                    };
                    (self.row_attr[i], blk, sig)
                });
                let row_cls = class_of(&parts.rows, self.n_rows);
                changed |= split_by(&mut parts.cols, |j| {
                    let mut sig: Vec<Vec<Id>> = vec![Vec::new(); parts.rows.len()];
                    for i in 0..self.n_rows {
                        sig[row_cls[i]].push(self.entries[i][j]);
                    }
                    for v in sig.iter_mut() {
                        v.sort_unstable();
                    }
                    let blk = if self.n_blocks > 0 {
                        block_cls[self.col_block[j]]
                    } else {
                        0
                    };
                    (self.col_attr[j], blk, sig)
                });
                if self.n_blocks > 0 {
                    let row_cls = class_of(&parts.rows, self.n_rows);
                    let col_cls = class_of(&parts.cols, self.n_cols);
                    changed |= split_by(&mut parts.blocks, |b| {
                        let mut rs: Vec<usize> = (0..self.n_rows)
                            .filter(|&i| self.row_block[i] == b)
                            .map(|i| row_cls[i])
                            .collect();
                        let mut cs: Vec<usize> = (0..self.n_cols)
                            .filter(|&j| self.col_block[j] == b)
                            .map(|j| col_cls[j])
                            .collect();
                        rs.sort_unstable();
                        cs.sort_unstable();
                        (self.block_attr[b], rs, cs)
                    });
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn discrete(&self, parts: &Parts) -> bool {
        parts.rows.iter().all(|c| c.len() == 1)
            && parts.cols.iter().all(|c| c.len() == 1)
            && parts.blocks.iter().all(|c| c.len() == 1)
    }

    /// The leaf's comparison vector: block ids of rows and columns in
    /// canonical block numbering, then entries row-major.
    fn leaf_vector(&self, parts: &Parts) -> (Vec<Id>, Vec<usize>, Vec<usize>, Vec<usize>) {
        let rows: Vec<usize> = parts.rows.iter().map(|c| c[0]).collect();
        let cols: Vec<usize> = parts.cols.iter().map(|c| c[0]).collect();
        let blocks: Vec<usize> = parts.blocks.iter().map(|c| c[0]).collect();
        let mut block_pos = vec![0usize; self.n_blocks];
        for (pos, &b) in blocks.iter().enumerate() {
            block_pos[b] = pos;
        }
        let mut v: Vec<Id> = Vec::new();
        if self.n_blocks > 0 {
            for &i in &rows {
                v.push(block_pos[self.row_block[i]] as Id);
            }
            for &j in &cols {
                v.push(block_pos[self.col_block[j]] as Id);
            }
        }
        for &i in &rows {
            for &j in &cols {
                v.push(self.entries[i][j]);
            }
        }
        (v, rows, cols, blocks)
    }

    fn search(
        &self,
        parts: Parts,
        best: &mut Option<(Vec<Id>, Vec<usize>, Vec<usize>, Vec<usize>)>,
        nodes: &mut usize,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > NODE_BUDGET {
            return Err(Error::Budget(
                "canonicalization node budget exceeded".into(),
            ));
        }
        if self.discrete(&parts) {
            let leaf = self.leaf_vector(&parts);
            if best.as_ref().map_or(true, |b| leaf.0 < b.0) {
                *best = Some(leaf);
            }
            return Ok(());
        }
        // individualize: first non-singleton class, blocks before rows before
        // columns
        let (which, ci) = if let Some(ci) = parts.blocks.iter().position(|c| c.len() > 1) {
            (0, ci)
        } else if let Some(ci) = parts.rows.iter().position(|c| c.len() > 1) {
            (1, ci)
        } else {
            (2, parts.cols.iter().position(|c| c.len() > 1).unwrap())
        };
        let members = match which {
            0 => parts.blocks[ci].clone(),
            1 => parts.rows[ci].clone(),
            _ => parts.cols[ci].clone(),
        };
        for x in members {
            let mut child = parts.clone();
            let target = match which {
                0 => &mut child.blocks,
                1 => &mut child.rows,
                _ => &mut child.cols,
            };
            let rest: Vec<usize> = target[ci].iter().copied().filter(|&y| y != x).collect();
            target[ci] = vec![x];
            target.insert(ci + 1, rest);
            if self.sync && which == 1 {
                child.cols = child.rows.clone();
            }
            self.refine(&mut child);
            self.search(child, best, nodes)?;
        }
        Ok(())
    }
}

struct RawTable {
    row_attrs: Vec<String>,
    col_attrs: Vec<String>,
    entries: Vec<Vec<String>>,
    row_block: Vec<usize>,
    col_block: Vec<usize>,
    block_attrs: Vec<String>,
    sync: bool,
}

fn intern(values: &mut Vec<String>) -> Vec<Id> {
    let mut sorted: Vec<String> = values.clone();
    sorted.sort();
    sorted.dedup();
    values
        .iter()
        .map(|v| sorted.binary_search(v).unwrap() as Id)
        .collect()
}

fn canonicalize(raw: RawTable) -> Result<CanonicalTable> {
    let n_rows = raw.entries.len();
    let n_cols = raw.entries.first().map_or(0, |r| r.len());
    let mut flat: Vec<String> = raw.entries.iter().flatten().cloned().collect();
    let flat_ids = intern(&mut flat);
    let entries: Vec<Vec<Id>> = flat_ids.chunks(n_cols).map(|c| c.to_vec()).collect();
    let mut ra = raw.row_attrs.clone();
    let mut ca = raw.col_attrs.clone();
    let mut ba = raw.block_attrs.clone();
    let inst = Instance {
        n_rows,
        n_cols,
        n_blocks: raw.block_attrs.len(),
        entries,
        row_attr: intern(&mut ra),
        col_attr: intern(&mut ca),
        block_attr: intern(&mut ba),
        row_block: raw.row_block.clone(),
        col_block: raw.col_block.clone(),
        sync: raw.sync,
    };
    let mut parts = Parts {
        rows: vec![(0..n_rows).collect()],
        cols: vec![(0..n_cols).collect()],
        blocks: if inst.n_blocks > 0 {
            vec![(0..inst.n_blocks).collect()]
        } else {
            Vec::new()
        },
    };
    if inst.sync {
        parts.cols = parts.rows.clone();
    }
    inst.refine(&mut parts);
    let mut best = None;
    let mut nodes = 0usize;
    inst.search(parts, &mut best, &mut nodes)?;
    let (_, rows, cols, blocks) =
        best.ok_or_else(|| Error::Internal("canonical search produced no leaf".into()))?;
    let mut block_pos = vec![0usize; inst.n_blocks];
    for (pos, &b) in blocks.iter().enumerate() {
        block_pos[b] = pos;
    }
    Ok(CanonicalTable {
        row_attrs: rows.iter().map(|&i| raw.row_attrs[i].clone()).collect(),
        col_attrs: cols.iter().map(|&j| raw.col_attrs[j].clone()).collect(),
        row_groups: if inst.n_blocks > 0 {
            rows.iter().map(|&i| block_pos[raw.row_block[i]]).collect()
        } else {
            Vec::new()
        },
        col_groups: if inst.n_blocks > 0 {
            cols.iter().map(|&j| block_pos[raw.col_block[j]]).collect()
        } else {
            Vec::new()
        },
        entries: rows
            .iter()
            .map(|&i| cols.iter().map(|&j| raw.entries[i][j].clone()).collect())
            .collect(),
    })
}

fn cyc_key(c: &Cyc) -> String {
    serde_json::to_string(&c.reduced()).expect("serialization cannot fail")
}

// ---------------------------------------------------------------------------
// Public canonical forms
// ---------------------------------------------------------------------------

/// Canonical character table: entries plus class sizes as column attributes.
/// Brauer pairs such as D8 and Q8 share this canonical form by design.
pub fn canonical_character_table(ct: &CharacterTable) -> Result<CanonicalTable> {
    canonicalize(RawTable {
        row_attrs: vec![String::new(); ct.k()],
        col_attrs: ct.classes.sizes.iter().map(|s| s.to_string()).collect(),
        entries: ct
            .rows
            .iter()
            .map(|row| row.iter().map(cyc_key).collect())
            .collect(),
        row_block: Vec::new(),
        col_block: Vec::new(),
        block_attrs: Vec::new(),
        sync: false,
    })
}

/// Canonical table of marks: rows and columns permuted by one permutation of
/// the subgroup classes, subgroup orders as attributes.
pub fn canonical_table_of_marks(tom: &TableOfMarks) -> Result<CanonicalTable> {
    let attrs: Vec<String> = tom
        .classes
        .classes
        .iter()
        .map(|c| c.rep.order().to_string())
        .collect();
    canonicalize(RawTable {
        row_attrs: attrs.clone(),
        col_attrs: attrs,
        entries: tom
            .marks
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect(),
        row_block: Vec::new(),
        col_block: Vec::new(),
        block_attrs: Vec::new(),
        sync: true,
    })
}

/// Canonical reduced global table: one block permutation acts on row blocks
/// and column blocks simultaneously; rows and columns move freely within
/// blocks.
pub fn canonical_global_table(gt: &GlobalTable) -> Result<CanonicalTable> {
    canonicalize(RawTable {
        row_attrs: vec![String::new(); gt.n_rows()],
        col_attrs: vec![String::new(); gt.n_cols()],
        entries: gt
            .entries
            .iter()
            .map(|row| row.iter().map(cyc_key).collect())
            .collect(),
        row_block: gt.row_labels.iter().map(|l| l.block).collect(),
        col_block: gt.col_labels.iter().map(|l| l.block).collect(),
        block_attrs: gt
            .blocks
            .iter()
            .map(|b| b.group.order_u64().to_string())
            .collect(),
        sync: false,
    })
}

/// Compares two canonical forms for equality.
pub fn tables_eq(a: &CanonicalTable, b: &CanonicalTable) -> bool {
    a == b
}

/// Twin report for a pair of groups with identical canonical character
/// tables.
#[derive(Debug, Serialize)]
pub struct TwinPair {
    pub a: String,
    pub b: String,
    pub same_table_of_marks: bool,
    pub same_global_table: bool,
}

/// Finds all pairs of groups in the list whose canonical character tables
/// coincide and reports whether their canonical tables of marks and reduced
/// global tables T(G, e) also coincide.
pub fn twin_search(groups: &[PermGroup]) -> Result<Vec<TwinPair>> {
    let mut digests = Vec::new();
    for g in groups {
        let ct = character_table(g)?;
        digests.push(canonical_character_table(&ct)?.digest());
    }
    let mut out = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            if digests[i] != digests[j] {
                continue;
            }
            let tom_i = canonical_table_of_marks(&crate::burnside::table_of_marks(&groups[i])?)?;
            let tom_j = canonical_table_of_marks(&crate::burnside::table_of_marks(&groups[j])?)?;
            let triv_i = crate::subgroup::Subgroup::trivial(&groups[i])?;
            let triv_j = crate::subgroup::Subgroup::trivial(&groups[j])?;
            let gt_i = canonical_global_table(&crate::globalrep::global_table(&groups[i], &triv_i)?)?;
            let gt_j = canonical_global_table(&crate::globalrep::global_table(&groups[j], &triv_j)?)?;
            out.push(TwinPair {
                a: groups[i].name().unwrap_or("?").to_string(),
                b: groups[j].name().unwrap_or("?").to_string(),
                same_table_of_marks: tables_eq(&tom_i, &tom_j),
                same_global_table: tables_eq(&gt_i, &gt_j),
            });
        }
    }
    Ok(out)
}

/// Relabels a permutation group by conjugating every generator by `sigma`.
/// The result is isomorphic with a scrambled element ordering; canonical
/// forms must be invariant under this.
pub fn relabel(g: &PermGroup, sigma: &crate::perm::Perm) -> Result<PermGroup> {
    let gens: Vec<crate::perm::Perm> = g
        .generators()
        .iter()
        .map(|p| p.conjugate_by(sigma))
        .collect();
    PermGroup::from_generators(g.degree(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::table_of_marks;
    use crate::globalrep::global_table;
    use crate::named::named_group;
    use crate::perm::Perm;
    use crate::subgroup::Subgroup;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_perm(deg: usize, rng: &mut impl Rng) -> Perm {
        let mut imgs: Vec<u16> = (0..deg as u16).collect();
        imgs.shuffle(rng);
        Perm::from_images(imgs).unwrap()
    }

    #[test]
    fn d8_q8_are_character_twins() {
        let d8 = named_group("D8").unwrap();
        let q8 = named_group("Q8").unwrap();
        let pairs = twin_search(&[d8, q8]).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!(!pairs[0].same_table_of_marks);
        assert!(!pairs[0].same_global_table);
    }

    #[test]
    fn non_twins_have_distinct_chartabs() {
        let c6 = named_group("C6").unwrap();
        let s3 = named_group("S3").unwrap();
        let pairs = twin_search(&[c6, s3]).unwrap();
        assert!(pairs.is_empty());
    }

    #[test]
    fn chartab_and_tom_invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for name in ["S3", "D8", "Q8", "A4", "C12"] {
            let g = named_group(name).unwrap();
            let ct0 = canonical_character_table(&crate::chartab::character_table(&g).unwrap())
                .unwrap()
                .digest();
            let tom0 = canonical_table_of_marks(&table_of_marks(&g).unwrap())
                .unwrap()
                .digest();
            for _ in 0..10 {
                let sigma = random_perm(g.degree(), &mut rng);
                let h = relabel(&g, &sigma).unwrap();
                let ct = canonical_character_table(&crate::chartab::character_table(&h).unwrap())
                    .unwrap()
                    .digest();
                let tom = canonical_table_of_marks(&table_of_marks(&h).unwrap())
                    .unwrap()
                    .digest();
                assert_eq!(ct0, ct, "{} chartab", name);
                assert_eq!(tom0, tom, "{} tom", name);
            }
        }
    }

    #[test]
    fn global_table_invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = named_group("D8").unwrap();
        let r2 = g.generators()[0].pow(2);
        let n = Subgroup::generated(&g, &[r2]).unwrap();
        let base = canonical_global_table(&global_table(&g, &n).unwrap())
            .unwrap()
            .digest();
        for _ in 0..5 {
            let sigma = random_perm(g.degree(), &mut rng);
            let h = relabel(&g, &sigma).unwrap();
            let n_h = Subgroup::generated(
                &h,
                &n.elements()
                    .iter()
                    .map(|e| e.conjugate_by(&sigma))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let d = canonical_global_table(&global_table(&h, &n_h).unwrap())
                .unwrap()
                .digest();
            assert_eq!(base, d);
        }
    }

    #[test]
    fn canonical_form_is_stable() {
        // digest is deterministic across calls
        let g = named_group("S4").unwrap();
        let t = table_of_marks(&g).unwrap();
        let a = canonical_table_of_marks(&t).unwrap().digest();
        let b = canonical_table_of_marks(&t).unwrap().digest();
        assert_eq!(a, b);
    }
}
