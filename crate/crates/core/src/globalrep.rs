//! The reduced global representation ring R(G,N) and its table T(G,N):
//! construction, block access, the block-property suite, and the recovery
//! procedures for element orders and abelian subgroups.

use num_rational::BigRational;
use serde::Serialize;

use crate::burnside::{class_label, table_of_marks_with};
use crate::chartab::{character_table, induce, restrict, CharacterTable, ClassFunction};
use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::subgroup::{all_subgroups, is_normal, quotient_group, Subgroup, SubgroupClassList};

/// One diagonal block subgroup of the table: the subgroup class, its
/// standalone realization and character table, plus the deduplicated row and
/// column labels local to the block.
pub struct Block {
    /// index into the full subgroup class list
    pub class_index: usize,
    pub group: PermGroup,
    pub table: CharacterTable,
    /// character orbits under N_G(H)-conjugation; each orbit lists character
    /// table row indices, orbit representative first
    pub row_orbits: Vec<Vec<usize>>,
    /// element orbits under N_G(K)-conjugation; each orbit lists parent
    /// element indices, orbit representative (minimal index) first
    pub col_orbits: Vec<Vec<usize>>,
    pub row_start: usize,
    pub col_start: usize,
}

/// Row label: (block position, character orbit within the block).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RowLabel {
    pub block: usize,
    pub orbit: usize,
}

/// Column label: (block position, element orbit within the block).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ColLabel {
    pub block: usize,
    pub orbit: usize,
}

pub struct GlobalTable {
    pub group: PermGroup,
    /// parent element indices of N, sorted
    pub n_indices: Vec<usize>,
    pub classes: SubgroupClassList,
    pub blocks: Vec<Block>,
    pub row_labels: Vec<RowLabel>,
    pub col_labels: Vec<ColLabel>,
    pub entries: Vec<Vec<Cyc>>,
    /// exp(G); every stored entry lives at this conductor
    pub conductor: u64,
}

/// The global mark (G/H, V)(K, k) = sum over K-fixed cosets gH of
/// chi_V(g^-1 k g). `chi` is a class function on the standalone realization
/// of `h` (as produced by [`Subgroup::as_group`]).
pub fn global_mark(
    g: &PermGroup,
    h: &Subgroup,
    chi: &ClassFunction,
    k_sub: &Subgroup,
    k_elem: &Perm,
) -> Result<Cyc> {
    if !k_sub.contains(g, k_elem) {
        return Err(Error::Input("global mark: element not in K".into()));
    }
    let h_grp = h.as_group(g)?;
    if chi.group_hash != h_grp.content_hash() {
        return Err(Error::Input(
            "global mark: class function not on the realization of H".into(),
        ));
    }
    let h_classes = h_grp.conjugacy_classes()?;
    let transversal = fixed_coset_transversal(g, h, k_sub)?;
    let mut s = Cyc::zero();
    for t in &transversal {
        let moved = k_elem.conjugate_by(&t.inverse());
        let c = h_classes.class_of_element(&h_grp, &moved)?;
        s = s.add(&chi.values[c]);
    }
    Ok(s)
}

/// One representative per coset gH with g^-1 K g contained in H. The value of
/// the global-mark sum does not depend on which representative of each coset
/// is chosen, because replacing g by gh conjugates the argument within H.
fn fixed_coset_transversal(g: &PermGroup, h: &Subgroup, k: &Subgroup) -> Result<Vec<Perm>> {
    let elems = g.elements()?;
    let mut seen = vec![false; elems.len()];
    let mut out = Vec::new();
    for (xi, x) in elems.iter().enumerate() {
        if seen[xi] {
            continue;
        }
        for hh in h.elements() {
            seen[g.element_index(&(x * hh))?] = true;
        }
        let xinv = x.inverse();
        if k
            .elements()
            .iter()
            .all(|kk| h.contains(g, &kk.conjugate_by(&xinv)))
        {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Builds T(G, N) for a normal subgroup N.
pub fn global_table(g: &PermGroup, n: &Subgroup) -> Result<GlobalTable> {
    if !is_normal(g, n)? {
        return Err(Error::Input("global table needs a normal subgroup".into()));
    }
    let classes = all_subgroups(g)?;
    let conductor = g.exponent()?;
    let elems = g.elements()?;

    // blocks: subgroup classes containing N, already in (order, key) layout
    let mut blocks: Vec<Block> = Vec::new();
    let mut row_labels = Vec::new();
    let mut col_labels = Vec::new();
    for (ci, class) in classes.classes.iter().enumerate() {
        if !n.is_subgroup_of(&class.rep) {
            continue;
        }
        let h_grp = class.rep.as_group(g)?;
        let table = character_table(&h_grp)?;
        let h_classes = &table.classes;

        // distinct permutations of H's classes induced by N_G(H)-conjugation
        let mut class_perms: Vec<Vec<usize>> = Vec::new();
        for xi in class.normalizer.indices() {
            let x = &elems[*xi];
            let sigma: Vec<usize> = h_classes
                .reps
                .iter()
                .map(|rep| h_classes.class_of_element(&h_grp, &rep.conjugate_by(x)))
                .collect::<Result<Vec<_>>>()?;
            if !class_perms.contains(&sigma) {
                class_perms.push(sigma);
            }
        }

        // character orbits under those permutations
        let kc = table.k();
        let mut assigned = vec![false; kc];
        let mut row_orbits: Vec<Vec<usize>> = Vec::new();
        for i in 0..kc {
            if assigned[i] {
                continue;
            }
            let mut orbit = vec![i];
            assigned[i] = true;
            for j in i + 1..kc {
                if assigned[j] {
                    continue;
                }
                let conj = class_perms.iter().any(|sigma| {
                    (0..kc).all(|c| table.rows[j][c] == table.rows[i][sigma[c]])
                });
                if conj {
                    orbit.push(j);
                    assigned[j] = true;
                }
            }
            // representative: lexicographically least value vector
            orbit.sort_by_key(|&r| CharacterTable::row_key(&table.rows[r], table.conductor));
            row_orbits.push(orbit);
        }
        // block row order: trivial orbit first, then ascending degree,
        // degree ties by descending order of the representative value vector
        row_orbits.sort_by(|a, b| {
            let (ra, rb) = (a[0], b[0]);
            let a_triv = table.rows[ra].iter().all(|v| v == &Cyc::one());
            let b_triv = table.rows[rb].iter().all(|v| v == &Cyc::one());
            b_triv
                .cmp(&a_triv)
                .then(table.degrees[ra].cmp(&table.degrees[rb]))
                .then_with(|| {
                    let ka = CharacterTable::row_key(&table.rows[ra], table.conductor);
                    let kb = CharacterTable::row_key(&table.rows[rb], table.conductor);
                    kb.cmp(&ka)
                })
        });

        // element orbits of K under N_G(K)-conjugation, ordered by the least
        // parent element index in the orbit (identity orbit first)
        let mut col_assigned = vec![false; elems.len()];
        let mut col_orbits: Vec<Vec<usize>> = Vec::new();
        for &ei in class.rep.indices() {
            if col_assigned[ei] {
                continue;
            }
            let mut orbit = Vec::new();
            for xi in class.normalizer.indices() {
                let moved = elems[ei].conjugate_by(&elems[*xi]);
                let mi = g.element_index(&moved)?;
                if !col_assigned[mi] {
                    col_assigned[mi] = true;
                    orbit.push(mi);
                }
            }
            orbit.sort_unstable();
            col_orbits.push(orbit);
        }
        col_orbits.sort_by_key(|o| o[0]);

        let block_pos = blocks.len();
        let row_start = row_labels.len();
        let col_start = col_labels.len();
        for orbit in 0..row_orbits.len() {
            row_labels.push(RowLabel {
                block: block_pos,
                orbit,
            });
        }
        for orbit in 0..col_orbits.len() {
            col_labels.push(ColLabel {
                block: block_pos,
                orbit,
            });
        }
        blocks.push(Block {
            class_index: ci,
            group: h_grp,
            table,
            row_orbits,
            col_orbits,
            row_start,
            col_start,
        });
    }

    // entries, one (H, K) block pair at a time
    let total_rows = row_labels.len();
    let total_cols = col_labels.len();
    let mut entries = vec![vec![Cyc::zero(); total_cols]; total_rows];
    for hb in &blocks {
        let h_sub = &classes.classes[hb.class_index].rep;
        let h_classes = &hb.table.classes;
        for kb in &blocks {
            let k_sub = &classes.classes[kb.class_index].rep;
            let transversal = fixed_coset_transversal(g, h_sub, k_sub)?;
            if transversal.is_empty() {
                continue;
            }
            let inverses: Vec<Perm> = transversal.iter().map(|t| t.inverse()).collect();
            for (co, col_orbit) in kb.col_orbits.iter().enumerate() {
                let k_elem = &elems[col_orbit[0]];
                // H-class of t^-1 k t for each transversal element
                let arg_classes: Vec<usize> = inverses
                    .iter()
                    .map(|ti| {
                        h_classes.class_of_element(&hb.group, &k_elem.conjugate_by(ti))
                    })
                    .collect::<Result<Vec<_>>>()?;
                for (ro, row_orbit) in hb.row_orbits.iter().enumerate() {
                    let chi = &hb.table.rows[row_orbit[0]];
                    let mut s = Cyc::zero();
                    for &c in &arg_classes {
                        s = s.add(&chi[c]);
                    }
                    entries[hb.row_start + ro][kb.col_start + co] =
                        s.to_conductor(conductor);
                }
            }
        }
    }

    Ok(GlobalTable {
        group: g.clone(),
        n_indices: n.indices().to_vec(),
        classes,
        blocks,
        row_labels,
        col_labels,
        entries,
        conductor,
    })
}

impl GlobalTable {
    pub fn n_rows(&self) -> usize {
        self.entries.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    /// The submatrix B_{H,K} for block positions (hb, kb).
    pub fn block(&self, hb: usize, kb: usize) -> Result<Vec<Vec<Cyc>>> {
        let h = self
            .blocks
            .get(hb)
            .ok_or_else(|| Error::Input(format!("no row block {}", hb)))?;
        let k = self
            .blocks
            .get(kb)
            .ok_or_else(|| Error::Input(format!("no column block {}", kb)))?;
        Ok(self.entries[h.row_start..h.row_start + h.row_orbits.len()]
            .iter()
            .map(|row| row[k.col_start..k.col_start + k.col_orbits.len()].to_vec())
            .collect())
    }

    /// Whether K (block kb) is subconjugate to H (block hb) in G.
    pub fn subconjugate(&self, hb: usize, kb: usize) -> bool {
        let h = &self.classes.classes[self.blocks[hb].class_index];
        let k = &self.classes.classes[self.blocks[kb].class_index];
        k.conjugates.iter().any(|key| {
            key.iter().all(|i| h.rep.contains_index(*i))
        })
    }

    /// Mark vector of an integer combination of basis rows.
    pub fn element_marks(&self, coeffs: &[i64]) -> Result<Vec<Cyc>> {
        if coeffs.len() != self.n_rows() {
            return Err(Error::Input("coefficient length mismatch".into()));
        }
        let mut v = vec![Cyc::zero(); self.n_cols()];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let q = BigRational::from(num_bigint::BigInt::from(c));
                for (j, e) in self.entries[i].iter().enumerate() {
                    v[j] = v[j].add(&e.scale(&q));
                }
            }
        }
        Ok(v)
    }

    /// Pointwise product of two mark vectors (ring multiplication on marks).
    pub fn pointwise(&self, a: &[Cyc], b: &[Cyc]) -> Result<Vec<Cyc>> {
        if a.len() != self.n_cols() || b.len() != self.n_cols() {
            return Err(Error::Input("mark vector length mismatch".into()));
        }
        Ok(a.iter().zip(b).map(|(x, y)| x.mul(y)).collect())
    }

    pub fn row_name(&self, r: usize) -> String {
        let lab = self.row_labels[r];
        let block = &self.blocks[lab.block];
        format!(
            "({},chi{})",
            class_label(&self.classes, block.class_index),
            lab.orbit
        )
    }

    pub fn col_name(&self, c: usize) -> String {
        let lab = self.col_labels[c];
        let block = &self.blocks[lab.block];
        let rep = &self.group.elements().unwrap()[block.col_orbits[lab.orbit][0]];
        format!(
            "({},{})",
            class_label(&self.classes, block.class_index),
            rep.cycle_string()
        )
    }

    /// Plain-text rendering with block separators.
    pub fn pretty(&self) -> String {
        let ncols = self.n_cols();
        let mut cells: Vec<Vec<String>> = Vec::new();
        let mut header = vec![String::new()];
        for c in 0..ncols {
            if self
                .blocks
                .iter()
                .any(|b| b.col_start == c && c > 0)
            {
                header.push("|".into());
            }
            header.push(self.col_name(c));
        }
        cells.push(header);
        for r in 0..self.n_rows() {
            if self.blocks.iter().any(|b| b.row_start == r && r > 0) {
                cells.push(vec!["-".into()]);
            }
            let mut row = vec![self.row_name(r)];
            for c in 0..ncols {
                if self.blocks.iter().any(|b| b.col_start == c && c > 0) {
                    row.push("|".into());
                }
                row.push(format!("{}", self.entries[r][c].reduced()));
            }
            cells.push(row);
        }
        let width = cells
            .iter()
            .flat_map(|r| r.iter().map(|s| s.len()))
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        for row in &cells {
            if row.len() == 1 && row[0] == "-" {
                out.push_str(&"-".repeat((width + 1) * (ncols + 1)));
                out.push('\n');
                continue;
            }
            let line: Vec<String> = row.iter().map(|s| format!("{:>width$}", s)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header = vec!["row".to_string()];
        header.extend((0..self.n_cols()).map(|c| self.col_name(c)));
        out.push_str(&header.join(","));
        out.push('\n');
        for r in 0..self.n_rows() {
            let mut row = vec![self.row_name(r)];
            row.extend(
                self.entries[r]
                    .iter()
                    .map(|e| format!("{}", e.reduced())),
            );
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct BlockInfo {
            subgroup_order: usize,
            label: String,
            rows: usize,
            cols: usize,
        }
        #[derive(Serialize)]
        struct File<'a> {
            group_hash: String,
            group_name: Option<&'a str>,
            n_indices: &'a [usize],
            conductor: u64,
            blocks: Vec<BlockInfo>,
            row_names: Vec<String>,
            col_names: Vec<String>,
            entries: &'a [Vec<Cyc>],
        }
        let file = File {
            group_hash: self.group.content_hash(),
            group_name: self.group.name(),
            n_indices: &self.n_indices,
            conductor: self.conductor,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockInfo {
                    subgroup_order: self.classes.classes[b.class_index].rep.order(),
                    label: class_label(&self.classes, b.class_index),
                    rows: b.row_orbits.len(),
                    cols: b.col_orbits.len(),
                })
                .collect(),
            row_names: (0..self.n_rows()).map(|r| self.row_name(r)).collect(),
            col_names: (0..self.n_cols()).map(|c| self.col_name(c)).collect(),
            entries: &self.entries,
        };
        serde_json::to_string_pretty(&file).expect("serialization cannot fail")
    }

    /// Integer entry matrix, failing if any entry is irrational.
    pub fn integer_entries(&self) -> Option<Vec<Vec<num_bigint::BigInt>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.as_integer()).collect())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Property suite (Prop 4.2)
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct ItemResult {
    pub name: &'static str,
    pub pass: bool,
    /// first counterexample location, when failing
    pub detail: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct BlockPropertyReport {
    pub items: Vec<ItemResult>,
}

impl BlockPropertyReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

pub fn verify_block_properties(t: &GlobalTable) -> Result<BlockPropertyReport> {
    let mut items = Vec::new();
    items.push(check_top_left_marks(t)?);
    items.push(check_self_normalizing_blocks(t)?);
    items.push(check_zero_blocks(t)?);
    items.push(check_induce_restrict(t)?);
    Ok(BlockPropertyReport { items })
}

/// Item i: top-left entries of the blocks form the table of marks of G/N.
fn check_top_left_marks(t: &GlobalTable) -> Result<ItemResult> {
    let g = &t.group;
    let n = Subgroup::from_indices(g, t.n_indices.clone())?;
    let quot = quotient_group(g, &n)?;
    let q_classes = all_subgroups(&quot.group)?;
    // map each block subgroup to its image class in the quotient
    let mut image_class = Vec::with_capacity(t.blocks.len());
    for b in &t.blocks {
        let h = &t.classes.classes[b.class_index].rep;
        let gens: Vec<Perm> = h
            .elements()
            .iter()
            .map(|e| quot.project(g, e))
            .collect::<Result<Vec<_>>>()?;
        let img = Subgroup::generated(&quot.group, &gens)?;
        let ci = q_classes
            .class_of(&img)
            .ok_or_else(|| Error::Internal("projected subgroup class missing".into()))?;
        image_class.push(ci);
    }
    let tom = table_of_marks_with(&quot.group, q_classes)?;
    for (hb, hblock) in t.blocks.iter().enumerate() {
        for (kb, kblock) in t.blocks.iter().enumerate() {
            let expect = tom.marks[image_class[hb]][image_class[kb]];
            let got = &t.entries[hblock.row_start][kblock.col_start];
            if got.as_integer() != Some(num_bigint::BigInt::from(expect)) {
                return Ok(ItemResult {
                    name: "top-left-marks",
                    pass: false,
                    detail: Some(format!(
                        "block ({},{}): entry {} vs mark {}",
                        hb, kb, got, expect
                    )),
                });
            }
        }
    }
    Ok(ItemResult {
        name: "top-left-marks",
        pass: true,
        detail: None,
    })
}

/// Item ii: for self-normalizing H, the diagonal block is the character
/// table of H (up to the documented label matching).
fn check_self_normalizing_blocks(t: &GlobalTable) -> Result<ItemResult> {
    for (bi, block) in t.blocks.iter().enumerate() {
        let class = &t.classes.classes[block.class_index];
        if class.normalizer.order() != class.rep.order() {
            continue;
        }
        // with N_G(H) = H the element orbits are exactly the H-classes and
        // the character orbits are singletons, so the block is k x k
        let b = t.block(bi, bi)?;
        let ct = &block.table;
        if b.len() != ct.k() || block.col_orbits.len() != ct.k() {
            return Ok(ItemResult {
                name: "self-normalizing-chartab",
                pass: false,
                detail: Some(format!("block {}: size mismatch with Irr(H)", bi)),
            });
        }
        let elems = t.group.elements()?;
        for (co, orbit) in block.col_orbits.iter().enumerate() {
            let cls = ct
                .classes
                .class_of_element(&block.group, &elems[orbit[0]])?;
            for (ro, row_orbit) in block.row_orbits.iter().enumerate() {
                let expect = &ct.rows[row_orbit[0]][cls];
                if &b[ro][co] != expect {
                    return Ok(ItemResult {
                        name: "self-normalizing-chartab",
                        pass: false,
                        detail: Some(format!(
                            "block {} entry ({},{}): {} vs {}",
                            bi, ro, co, b[ro][co], expect
                        )),
                    });
                }
            }
        }
    }
    Ok(ItemResult {
        name: "self-normalizing-chartab",
        pass: true,
        detail: None,
    })
}

/// Item iii: B_{H,K} is a zero block iff K is not subconjugate to H.
fn check_zero_blocks(t: &GlobalTable) -> Result<ItemResult> {
    for hb in 0..t.blocks.len() {
        for kb in 0..t.blocks.len() {
            let b = t.block(hb, kb)?;
            let is_zero = b.iter().flatten().all(|e| e.is_zero());
            let subconj = t.subconjugate(hb, kb);
            if is_zero == subconj {
                return Ok(ItemResult {
                    name: "zero-blocks",
                    pass: false,
                    detail: Some(format!(
                        "block ({},{}): zero={} subconjugate={}",
                        hb, kb, is_zero, subconj
                    )),
                });
            }
        }
    }
    Ok(ItemResult {
        name: "zero-blocks",
        pass: true,
        detail: None,
    })
}

/// Item iv: B_{N,N} equals the induce-then-restrict matrix of Irr(N) after
/// deleting duplicate rows and columns.
fn check_induce_restrict(t: &GlobalTable) -> Result<ItemResult> {
    let g = &t.group;
    // N is the first block (smallest subgroup containing N)
    let nb = 0usize;
    let block = &t.blocks[nb];
    if t.classes.classes[block.class_index].rep.indices() != &t.n_indices[..] {
        return Err(Error::Internal("first block is not N".into()));
    }
    let n_grp = &block.group;
    let ct_n = &block.table;
    // induce each irreducible to G, restrict back to N
    let mut rows: Vec<Vec<Cyc>> = Vec::new();
    for i in 0..ct_n.k() {
        let psi = ct_n.row(i);
        let ind = induce(g, n_grp, &psi)?;
        let back = restrict(g, &ind, n_grp)?;
        if !rows.contains(&back.values) {
            rows.push(back.values);
        }
    }
    // deduplicate columns: N-classes fused under G-conjugation
    let mut col_groups: Vec<Vec<usize>> = Vec::new();
    let g_classes = g.conjugacy_classes()?;
    for c in 0..ct_n.k() {
        let gcls = g_classes.class_of_element(g, &ct_n.classes.reps[c])?;
        match col_groups
            .iter_mut()
            .find(|grp| g_classes.class_of_element(g, &ct_n.classes.reps[grp[0]]).unwrap() == gcls)
        {
            Some(grp) => grp.push(c),
            None => col_groups.push(vec![c]),
        }
    }
    let dedup: Vec<Vec<Cyc>> = rows
        .iter()
        .map(|r| col_groups.iter().map(|grp| r[grp[0]].clone()).collect())
        .collect();

    // align with B_{N,N}: match each block column to the fused class group
    let b = t.block(nb, nb)?;
    if b.len() != dedup.len() || col_groups.len() != block.col_orbits.len() {
        return Ok(ItemResult {
            name: "induce-restrict",
            pass: false,
            detail: Some(format!(
                "B_NN is {}x{}, induce-restrict dedup is {}x{}",
                b.len(),
                block.col_orbits.len(),
                dedup.len(),
                col_groups.len()
            )),
        });
    }
    let elems = g.elements()?;
    let mut col_map = Vec::with_capacity(block.col_orbits.len());
    for orbit in &block.col_orbits {
        let ncls = ct_n.classes.class_of_element(n_grp, &elems[orbit[0]])?;
        let gcls = g_classes.class_of_element(g, &ct_n.classes.reps[ncls])?;
        let pos = col_groups
            .iter()
            .position(|grp| {
                g_classes
                    .class_of_element(g, &ct_n.classes.reps[grp[0]])
                    .unwrap()
                    == gcls
            })
            .ok_or_else(|| Error::Internal("column class not matched".into()))?;
        col_map.push(pos);
    }
    // the two matrices must agree as row sets under the column alignment
    let aligned: Vec<Vec<Cyc>> = b
        .iter()
        .map(|row| {
            let mut v = vec![Cyc::zero(); row.len()];
            for (c, &m) in col_map.iter().enumerate() {
                v[m] = row[c].clone();
            }
            v
        })
        .collect();
    for (ri, row) in aligned.iter().enumerate() {
        if !dedup.contains(row) {
            return Ok(ItemResult {
                name: "induce-restrict",
                pass: false,
                detail: Some(format!("B_NN row {} missing from induce-restrict", ri)),
            });
        }
    }
    for (ri, row) in dedup.iter().enumerate() {
        if !aligned.contains(row) {
            return Ok(ItemResult {
                name: "induce-restrict",
                pass: false,
                detail: Some(format!("induce-restrict row {} missing from B_NN", ri)),
            });
        }
    }
    Ok(ItemResult {
        name: "induce-restrict",
        pass: true,
        detail: None,
    })
}

// ---------------------------------------------------------------------------
// Recovery procedures (Prop 4.3)
// ---------------------------------------------------------------------------

/// For a table with N = e: recovers the order of each G-conjugacy class from
/// the table alone, as the least subgroup order over blocks K whose row-block
/// B_{G,K} contains that character-table column. Returns (column order,
/// recovered order) per column of the G block.
pub fn recover_element_orders(t: &GlobalTable) -> Result<Vec<usize>> {
    if t.n_indices != vec![0] {
        return Err(Error::Input("element-order recovery needs N = e".into()));
    }
    let gb = t.blocks.len() - 1;
    let gblock = &t.blocks[gb];
    let row_range = gblock.row_start..gblock.row_start + gblock.row_orbits.len();
    let g_cols = gblock.col_start..gblock.col_start + gblock.col_orbits.len();
    let mut out = Vec::new();
    for col in g_cols {
        let target: Vec<&Cyc> = row_range.clone().map(|r| &t.entries[r][col]).collect();
        let mut best: Option<usize> = None;
        for kb in &t.blocks {
            let k_order = t.classes.classes[kb.class_index].rep.order();
            if best.map_or(false, |b| b <= k_order) {
                continue;
            }
            for c in kb.col_start..kb.col_start + kb.col_orbits.len() {
                let matches = row_range
                    .clone()
                    .zip(&target)
                    .all(|(r, tv)| &&t.entries[r][c] == tv);
                if matches {
                    best = Some(k_order);
                    break;
                }
            }
        }
        out.push(best.ok_or_else(|| Error::Internal("column not found in any block".into()))?);
    }
    Ok(out)
}

#[derive(Debug, PartialEq, Eq)]
pub struct AbelianRecovery {
    pub block: usize,
    pub abelian: bool,
    /// elementary-divisor name like "C2xC4" when abelian
    pub iso_type: Option<String>,
}

/// For a table with N = e: flags each block subgroup as abelian via the
/// first-column criterion of Prop 4.3, and reconstructs the isomorphism type
/// of the abelian ones from table data only (block top-left marks).
pub fn recover_abelian_subgroups(t: &GlobalTable) -> Result<Vec<AbelianRecovery>> {
    if t.n_indices != vec![0] {
        return Err(Error::Input("abelian recovery needs N = e".into()));
    }
    let nblocks = t.blocks.len();
    let g_order = t.group.order_u64() as usize;
    // marks matrix from block top-left entries (valid by Prop 4.2-i)
    let mut marks = vec![vec![0i64; nblocks]; nblocks];
    for (hb, h) in t.blocks.iter().enumerate() {
        for (kb, k) in t.blocks.iter().enumerate() {
            marks[hb][kb] = t.entries[h.row_start][k.col_start]
                .as_integer()
                .ok_or_else(|| Error::Internal("non-integer top-left entry".into()))?
                .try_into()
                .map_err(|_| Error::Internal("mark overflow".into()))?;
        }
    }
    let block_order =
        |b: usize| -> usize { t.classes.classes[t.blocks[b].class_index].rep.order() };
    // identify cyclic blocks and their generator order via element-order
    // recovery: the minimizing block for a G-class column is the class of
    // the cyclic subgroup generated by that element
    let orders = recover_element_orders(t)?;
    let gb = nblocks - 1;
    let gblock = &t.blocks[gb];
    let row_range = gblock.row_start..gblock.row_start + gblock.row_orbits.len();
    let mut cyclic_blocks: Vec<(usize, usize)> = Vec::new(); // (block, generator order)
    for (ci, col) in (gblock.col_start..gblock.col_start + gblock.col_orbits.len()).enumerate() {
        let target: Vec<&Cyc> = row_range.clone().map(|r| &t.entries[r][col]).collect();
        for (kbi, kb) in t.blocks.iter().enumerate() {
            if block_order(kbi) != orders[ci] {
                continue;
            }
            let hit = (kb.col_start..kb.col_start + kb.col_orbits.len()).any(|c| {
                row_range
                    .clone()
                    .zip(&target)
                    .all(|(r, tv)| &&t.entries[r][c] == tv)
            });
            if hit && !cyclic_blocks.iter().any(|&(b, _)| b == kbi) {
                cyclic_blocks.push((kbi, orders[ci]));
            }
        }
    }
    let mut out = Vec::new();
    for (hb, h) in t.blocks.iter().enumerate() {
        let class = &t.classes.classes[h.class_index];
        let nh_over_h = (g_order / class.conjugates.len()) / class.rep.order();
        let first_col: Vec<&Cyc> = (h.row_start..h.row_start + h.row_orbits.len())
            .map(|r| &t.entries[r][h.col_start])
            .collect();
        let expect = Cyc::from_int(nh_over_h as i64);
        let abelian = first_col.iter().all(|v| **v == expect);
        let iso_type = if abelian {
            // element-order counts of H from marks: the number of conjugates
            // of a cyclic C inside H is [G/H, C] * |H| / |N_G(C)|, and each
            // cyclic subgroup of order n carries phi(n) generators
            let mut order_counts: Vec<(usize, usize)> = Vec::new();
            for &(cb, n) in &cyclic_blocks {
                let n_gc = marks[cb][cb] as usize * block_order(cb);
                let conj_in_h = marks[hb][cb] as usize * block_order(hb) / n_gc;
                if conj_in_h > 0 {
                    let slot = order_counts.iter_mut().find(|(o, _)| *o == n);
                    let add = conj_in_h * euler_phi(n);
                    match slot {
                        Some((_, c)) => *c += add,
                        None => order_counts.push((n, add)),
                    }
                }
            }
            order_counts.sort_unstable();
            Some(abelian_type_from_order_counts(block_order(hb), &order_counts)?)
        } else {
            None
        };
        out.push(AbelianRecovery {
            block: hb,
            abelian,
            iso_type,
        });
    }
    Ok(out)
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count()
}

/// Finds the abelian group of the given order whose element-order statistics
/// match, returned in elementary-divisor form "C2xC4".
pub fn abelian_type_from_order_counts(order: usize, counts: &[(usize, usize)]) -> Result<String> {
    for divisors in abelian_types(order) {
        if abelian_order_counts(&divisors) == counts {
            if divisors.is_empty() {
                return Ok("C1".into());
            }
            let name: Vec<String> = divisors.iter().map(|d| format!("C{}", d)).collect();
            return Ok(name.join("x"));
        }
    }
    Err(Error::Internal(format!(
        "no abelian group of order {} matches the recovered order counts",
        order
    )))
}

/// All abelian isomorphism types of the given order, each as an ascending
/// list of prime-power elementary divisors.
fn abelian_types(order: usize) -> Vec<Vec<usize>> {
    // prime factorization, then partitions of each exponent
    let mut factors: Vec<(usize, usize)> = Vec::new();
    let mut n = order;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    let mut types: Vec<Vec<usize>> = vec![vec![]];
    for (p, e) in factors {
        let parts = partitions(e);
        let mut next = Vec::new();
        for t in &types {
            for part in &parts {
                let mut nt = t.clone();
                for &k in part {
                    nt.push(p.pow(k as u32));
                }
                next.push(nt);
            }
        }
        types = next;
    }
    for t in &mut types {
        t.sort_unstable();
    }
    types
}

fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Element-order statistics of the abelian group with the given elementary
/// divisors, as sorted (order, count) pairs without the identity... including
/// order 1 (count 1), matching the recovery's accounting.
fn abelian_order_counts(divisors: &[usize]) -> Vec<(usize, usize)> {
    let mut counts: Vec<(usize, usize)> = Vec::new();
    let mut tuple = vec![0usize; divisors.len()];
    loop {
        let order = tuple
            .iter()
            .zip(divisors)
            .map(|(&x, &d)| d / num_integer::gcd(x, d))
            .fold(1, num_integer::lcm);
        match counts.iter_mut().find(|(o, _)| *o == order) {
            Some((_, c)) => *c += 1,
            None => counts.push((order, 1)),
        }
        // increment mixed-radix tuple
        let mut i = 0;
        loop {
            if i == divisors.len() {
                counts.sort_unstable();
                return counts;
            }
            tuple[i] += 1;
            if tuple[i] < divisors[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}
