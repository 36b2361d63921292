//! Exact sparse Gaussian elimination over a field.

use std::collections::BTreeMap;

use crate::coeff::Field;

pub type SparseVec<K, F> = BTreeMap<K, F>;

/// `dst += c * src`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone, F: Field>(dst: &mut SparseVec<K, F>, c: &F, src: &SparseVec<K, F>) {
    for (k, v) in src {
        let add = c.times(v);
        match dst.get_mut(k) {
            Some(x) => {
                x.add_in(&add);
                if x.is_czero() {
                    dst.remove(k);
                }
            }
            None => {
                if !add.is_czero() {
                    dst.insert(k.clone(), add);
                }
            }
        }
    }
}

fn scale_vec<K: Ord + Clone, F: Field>(v: &mut SparseVec<K, F>, c: &F) {
    for x in v.values_mut() {
        *x = x.times(c);
    }
}

/// The system has no solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistent;

/// Row echelon form of a linear system `A x = b`, built one equation at a time.
/// The pivot of each stored row is its first nonzero column, scaled to 1.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    ncols: usize,
    rows: BTreeMap<usize, (SparseVec<usize, F>, F)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &mut SparseVec<usize, F>, rhs: &mut F) {
        let mut from = 0usize;
        loop {
            let next = row.range(from..).find(|(k, _)| self.rows.contains_key(k)).map(|(k, v)| (*k, v.clone()));
            let Some((k, c)) = next else { break };
            let (prow, prhs) = &self.rows[&k];
            let neg = c.negated();
            axpy(row, &neg, prow);
            rhs.add_in(&neg.times(prhs));
            from = k + 1;
        }
    }

    /// Adds `row · x = rhs`. Returns whether the rank grew.
    pub fn add_equation(&mut self, mut row: SparseVec<usize, F>, mut rhs: F) -> Result<bool, Inconsistent> {
        row.retain(|_, v| !v.is_czero());
        self.reduce(&mut row, &mut rhs);
        let Some((&p, pv)) = row.iter().next() else {
            return if rhs.is_czero() { Ok(false) } else { Err(Inconsistent) };
        };
        let inv = pv.inv();
        scale_vec(&mut row, &inv);
        rhs = rhs.times(&inv);
        self.rows.insert(p, (row, rhs));
        Ok(true)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.rows.contains_key(c)).collect()
    }

    /// Back substitution with the given values on free columns.
    fn back_substitute(&self, free: &BTreeMap<usize, F>, homogeneous: bool) -> Vec<F> {
        let mut x = vec![F::czero(); self.ncols];
        for (c, v) in free {
            x[*c] = v.clone();
        }
        for (&p, (row, rhs)) in self.rows.iter().rev() {
            let mut acc = if homogeneous { F::czero() } else { rhs.clone() };
            for (&c, a) in row.range(p + 1..) {
                if !x[c].is_czero() {
                    acc = acc.minus(&a.times(&x[c]));
                }
            }
            x[p] = acc;
        }
        x
    }

    /// The solution with every free parameter set to zero.
    pub fn solve_zero_free(&self) -> Vec<F> {
        self.back_substitute(&BTreeMap::new(), false)
    }

    /// Basis of the kernel of the homogeneous system, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        self.free_columns()
            .into_iter()
            .map(|c| self.back_substitute(&BTreeMap::from([(c, F::cone())]), true))
            .collect()
    }
}

/// Kernel of a matrix given by sparse rows.
pub fn nullspace<F: Field>(rows: impl IntoIterator<Item = SparseVec<usize, F>>, ncols: usize) -> Vec<Vec<F>> {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.add_equation(r, F::czero()).expect("homogeneous systems are consistent");
    }
    ech.nullspace()
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone, F: Field>(vectors: impl IntoIterator<Item = SparseVec<K, F>>) -> usize {
    let mut t = SpanTracker::<K, F>::new();
    let mut n = 0;
    for v in vectors {
        if t.insert(n, v) {
            n += 1;
        }
    }
    t.rank()
}

/// Echelon basis of a growing span that remembers how each row was obtained
/// from the inserted vectors.
#[derive(Debug, Clone)]
pub struct SpanTracker<K: Ord + Clone, F: Field> {
    rows: BTreeMap<K, (SparseVec<K, F>, SparseVec<usize, F>)>,
}

impl<K: Ord + Clone, F: Field> Default for SpanTracker<K, F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone, F: Field> SpanTracker<K, F> {
    pub fn new() -> Self {
        SpanTracker { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut SparseVec<K, F>, combo: &mut SparseVec<usize, F>) {
        loop {
            let next = v.iter().find(|(k, _)| self.rows.contains_key(k)).map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = next else { break };
            let (row, rc) = &self.rows[&k];
            let neg = c.negated();
            axpy(v, &neg, row);
            axpy(combo, &neg, rc);
        }
    }

    /// Inserts vector number `id`; returns whether the span grew.
    pub fn insert(&mut self, id: usize, mut v: SparseVec<K, F>) -> bool {
        v.retain(|_, c| !c.is_czero());
        let mut combo = BTreeMap::from([(id, F::cone())]);
        self.reduce(&mut v, &mut combo);
        let Some((p, pv)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = pv.inv();
        scale_vec(&mut v, &inv);
        scale_vec(&mut combo, &inv);
        self.rows.insert(p, (v, combo));
        true
    }

    pub fn contains(&self, v: &SparseVec<K, F>) -> bool {
        self.express(v).is_some()
    }

    /// Coefficients `c_id` with `Σ c_id · inserted[id] = v`, if `v` is in the span.
    pub fn express(&self, v: &SparseVec<K, F>) -> Option<SparseVec<usize, F>> {
        let mut w: SparseVec<K, F> = v.iter().filter(|(_, c)| !c.is_czero()).map(|(k, c)| (k.clone(), c.clone())).collect();
        let mut combo = BTreeMap::new();
        self.reduce(&mut w, &mut combo);
        if !w.is_empty() {
            return None;
        }
        for c in combo.values_mut() {
            *c = c.negated();
        }
        combo.retain(|_, c: &mut F| !c.is_czero());
        Some(combo)
    }
}
