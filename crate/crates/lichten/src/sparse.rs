//! Exact sparse matrices over the Gaussian rationals.
//!
//! Columns are stored sparse and canonical (sorted by row, no zeros).
//! Rank and kernel come from fraction-exact Gaussian elimination with a
//! small-support pivot rule; before eliminating, the column set is split
//! into connected components of the bipartite support graph, which turns
//! the mode-decoupled operators of this crate into many small independent
//! blocks.

use crate::scalar::Scalar;
use std::collections::BTreeMap;

pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Build from per-column sparse vectors; entries must be sorted by row
    /// index, in range, without zeros or duplicates.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        for col in &columns {
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(col.iter().all(|(r, v)| *r < rows && !v.is_zero()));
        }
        let cols = columns.len();
        SparseMat { rows, cols, columns }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, Scalar::one())]).collect();
        SparseMat { rows: n, cols: n, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    /// Horizontal concatenation; all blocks must have the same row count.
    pub fn hstack(blocks: &[&SparseMat]) -> SparseMat {
        let rows = blocks.first().map(|b| b.rows).unwrap_or(0);
        assert!(blocks.iter().all(|b| b.rows == rows));
        let mut columns = Vec::new();
        for b in blocks {
            columns.extend(b.columns.iter().cloned());
        }
        SparseMat { rows, cols: columns.len(), columns }
    }

    /// Vertical concatenation; all blocks must have the same column count.
    pub fn vstack(blocks: &[&SparseMat]) -> SparseMat {
        let cols = blocks.first().map(|b| b.cols).unwrap_or(0);
        assert!(blocks.iter().all(|b| b.cols == cols));
        let mut columns = vec![Vec::new(); cols];
        let mut offset = 0;
        for b in blocks {
            for (j, col) in b.columns.iter().enumerate() {
                columns[j].extend(col.iter().map(|(r, v)| (r + offset, v.clone())));
            }
            offset += b.rows;
        }
        SparseMat { rows: offset, cols, columns }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut columns = Vec::with_capacity(rhs.cols);
        for col in &rhs.columns {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (i, v) in col {
                for (r, w) in &self.columns[*i] {
                    let prod = v * w;
                    match acc.entry(*r) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(prod);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() += &prod;
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                    }
                }
            }
            columns.push(acc.into_iter().collect());
        }
        SparseMat { rows: self.rows, cols: rhs.cols, columns }
    }

    /// Apply to a sparse vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let rhs = SparseMat { rows: self.cols, cols: 1, columns: vec![v.clone()] };
        self.mul(&rhs).columns.pop().unwrap()
    }

    /// Connected components of columns under shared row support. Zero
    /// columns become singleton components.
    fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.cols).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut row_owner: BTreeMap<usize, usize> = BTreeMap::new();
        for j in 0..self.cols {
            for (r, _) in &self.columns[j] {
                match row_owner.entry(*r) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(j);
                    }
                    std::collections::btree_map::Entry::Occupied(e) => {
                        let a = find(&mut parent, *e.get());
                        let b = find(&mut parent, j);
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for j in 0..self.cols {
            groups.entry(find(&mut parent, j)).or_default().push(j);
        }
        groups.into_values().collect()
    }

    pub fn rank(&self) -> usize {
        self.components()
            .iter()
            .map(|comp| Eliminator::new(self, comp).run().rank)
            .sum()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// A basis of the kernel as sparse column vectors (sorted by index).
    /// Deterministic: free columns are processed in increasing order.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let mut vectors = Vec::new();
        for comp in self.components() {
            let elim = Eliminator::new(self, &comp).run();
            vectors.extend(elim.kernel_vectors());
        }
        vectors.sort_by_key(|v| v.first().map(|(i, _)| *i).unwrap_or(usize::MAX));
        vectors
    }

    /// Canonical triplet export, one `row, col, value` line per entry,
    /// ordered by column then row.
    pub fn triplet_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# rows={} cols={} nnz={}\n", self.rows, self.cols, self.nnz()));
        for (j, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                out.push_str(&format!("{r}, {j}, {}\n", v.triplet_string()));
            }
        }
        out
    }
}

/// Elimination workspace for one connected component.
struct Eliminator {
    // rows of the component, as col -> value maps over global column ids
    active: Vec<BTreeMap<usize, Scalar>>,
    // pivot rows in creation order, with their pivot column
    done: Vec<(usize, BTreeMap<usize, Scalar>)>,
    columns: Vec<usize>,
    rank: usize,
}

impl Eliminator {
    fn new(mat: &SparseMat, comp: &[usize]) -> Self {
        let mut rows: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        for &j in comp {
            for (r, v) in mat.column(j) {
                rows.entry(*r).or_default().insert(j, v.clone());
            }
        }
        Eliminator {
            active: rows.into_values().collect(),
            done: Vec::new(),
            columns: comp.to_vec(),
            rank: 0,
        }
    }

    fn run(mut self) -> Self {
        loop {
            // pivot rule: smallest row support, ties by smallest column
            let best = self
                .active
                .iter()
                .enumerate()
                .filter(|(_, row)| !row.is_empty())
                .min_by_key(|(i, row)| (row.len(), *row.keys().next().unwrap(), *i));
            let Some((ri, _)) = best else { break };
            let pivot_row = self.active.swap_remove(ri);
            let (&pc, pv) = pivot_row.iter().next().expect("nonempty");
            let pv = pv.clone();
            for row in &mut self.active {
                let Some(val) = row.remove(&pc) else { continue };
                let factor = &val * &pv.inv().expect("pivot nonzero");
                for (c, w) in &pivot_row {
                    if *c == pc {
                        continue;
                    }
                    let delta = &factor * w;
                    match row.entry(*c) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(-delta);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() -= &delta;
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                    }
                }
            }
            self.done.push((pc, pivot_row));
            self.rank += 1;
        }
        self
    }

    /// Back-substitute one kernel vector per free column.
    fn kernel_vectors(&self) -> Vec<SparseVec> {
        let pivot_cols: std::collections::BTreeSet<usize> =
            self.done.iter().map(|(c, _)| *c).collect();
        let mut out = Vec::new();
        for &free in &self.columns {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut x: BTreeMap<usize, Scalar> = BTreeMap::new();
            x.insert(free, Scalar::one());
            for (pc, row) in self.done.iter().rev() {
                let mut acc = Scalar::zero();
                for (c, w) in row {
                    if c == pc {
                        continue;
                    }
                    if let Some(v) = x.get(c) {
                        acc += &(w * v);
                    }
                }
                if !acc.is_zero() {
                    let pv = row.get(pc).expect("pivot entry");
                    x.insert(*pc, -(&acc * &pv.inv().expect("pivot nonzero")));
                }
            }
            out.push(x.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        out
    }
}
