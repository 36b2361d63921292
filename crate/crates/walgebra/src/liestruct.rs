//! The Lie (super)algebra sl_N or sl_{N1|N2}, its sl₂-triple attached to a partition,
//! the normalized form, the centralizer g^f and the dual bases built from it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{q, Q};
use crate::half::Half;
use crate::linalg::{nullspace, rank, Echelon, SparseVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("InvalidPartition: {0}")]
    InvalidPartition(String),
    #[error("SuperEqualParts: N1 = N2 = {0}")]
    SuperEqualParts(u32),
    #[error("NormalizationImpossible: supertrace(ef) = 0")]
    NormalizationImpossible,
    #[error("SingularPairing at ad x weight {0}")]
    SingularPairing(Half),
}

impl SpecError {
    /// Stable error name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            SpecError::InvalidPartition(_) => "InvalidPartition",
            SpecError::SuperEqualParts(_) => "SuperEqualParts",
            SpecError::NormalizationImpossible => "NormalizationImpossible",
            SpecError::SingularPairing(_) => "SingularPairing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Plain,
    Super,
}

/// Partition data: the even blocks `parts1` and, for the super kind, the odd blocks `parts2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionSpec {
    kind: Kind,
    parts1: Vec<u32>,
    parts2: Vec<u32>,
}

/// Parses `"3,2,2"` into a list of parts. Whitespace around entries is ignored.
pub fn parse_partition(s: &str) -> Result<Vec<u32>, SpecError> {
    let s = s.trim();
    let s = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
    if s.trim().is_empty() {
        return Err(SpecError::InvalidPartition("empty partition".into()));
    }
    s.split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<u32>().map_err(|_| SpecError::InvalidPartition(format!("not a positive integer: {p:?}")))
        })
        .collect()
}

fn check_parts(parts: &[u32]) -> Result<(), SpecError> {
    if parts.is_empty() {
        return Err(SpecError::InvalidPartition("empty partition".into()));
    }
    if parts.iter().any(|&m| m == 0) {
        return Err(SpecError::InvalidPartition("parts must be positive".into()));
    }
    if parts.iter().any(|&m| m > 64) {
        return Err(SpecError::InvalidPartition("parts larger than 64 are not supported".into()));
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(SpecError::InvalidPartition("parts must be weakly decreasing".into()));
    }
    if parts.len() > 64 {
        return Err(SpecError::InvalidPartition("too many parts".into()));
    }
    Ok(())
}

impl PartitionSpec {
    pub fn new(kind: Kind, parts1: Vec<u32>, parts2: Vec<u32>) -> Result<Self, SpecError> {
        check_parts(&parts1)?;
        match kind {
            Kind::Plain => {
                if !parts2.is_empty() {
                    return Err(SpecError::InvalidPartition("plain kind takes a single partition".into()));
                }
            }
            Kind::Super => {
                check_parts(&parts2)?;
                let (n1, n2): (u32, u32) = (parts1.iter().sum(), parts2.iter().sum());
                if n1 == n2 {
                    return Err(SpecError::SuperEqualParts(n1));
                }
            }
        }
        Ok(PartitionSpec { kind, parts1, parts2 })
    }

    pub fn plain(parts: &[u32]) -> Result<Self, SpecError> {
        Self::new(Kind::Plain, parts.to_vec(), Vec::new())
    }

    pub fn superalg(parts1: &[u32], parts2: &[u32]) -> Result<Self, SpecError> {
        Self::new(Kind::Super, parts1.to_vec(), parts2.to_vec())
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn parts1(&self) -> &[u32] {
        &self.parts1
    }

    pub fn parts2(&self) -> &[u32] {
        &self.parts2
    }

    /// All block sizes, even blocks first.
    pub fn blocks(&self) -> Vec<u32> {
        self.parts1.iter().chain(&self.parts2).copied().collect()
    }

    pub fn d(&self) -> usize {
        self.parts1.len() + self.parts2.len()
    }

    pub fn d1(&self) -> usize {
        self.parts1.len()
    }

    pub fn n1(&self) -> usize {
        self.parts1.iter().sum::<u32>() as usize
    }

    pub fn n(&self) -> usize {
        self.n1() + self.parts2.iter().sum::<u32>() as usize
    }

    pub fn is_super(&self) -> bool {
        self.kind == Kind::Super
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self.kind {
            Kind::Plain => write!(f, "({})", join(&self.parts1)),
            Kind::Super => write!(f, "({}|{})", join(&self.parts1), join(&self.parts2)),
        }
    }
}

/// Sparse matrix in gl_N or gl_{N1|N2}. Indices `>= n1` are odd.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperMatrix {
    n: usize,
    n1: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|((r, c), v)| format!("{v}·E{},{}", r + 1, c + 1)).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl SuperMatrix {
    pub fn zero(n: usize, n1: usize) -> Self {
        SuperMatrix { n, n1, entries: BTreeMap::new() }
    }

    pub fn unit(n: usize, n1: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zero(n, n1);
        m.entries.insert((r, c), Q::one());
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Q> {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: &Q) {
        let e = self.entries.entry((r, c)).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn index_odd(&self, r: usize) -> bool {
        r >= self.n1
    }

    pub fn entry_odd(&self, r: usize, c: usize) -> bool {
        self.index_odd(r) != self.index_odd(c)
    }

    /// `Some(parity)` for homogeneous nonzero matrices.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.entries.keys().map(|&(r, c)| self.entry_odd(r, c));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn parity_part(&self, odd: bool) -> SuperMatrix {
        SuperMatrix {
            n: self.n,
            n1: self.n1,
            entries: self.entries.iter().filter(|((r, c), _)| self.entry_odd(*r, *c) == odd).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    pub fn plus(&self, o: &SuperMatrix) -> SuperMatrix {
        let mut m = self.clone();
        for (&(r, c), v) in &o.entries {
            m.add_entry(r, c, v);
        }
        m
    }

    pub fn scaled(&self, x: &Q) -> SuperMatrix {
        if x.is_zero() {
            return Self::zero(self.n, self.n1);
        }
        SuperMatrix { n: self.n, n1: self.n1, entries: self.entries.iter().map(|(k, v)| (*k, v * x)).collect() }
    }

    pub fn minus(&self, o: &SuperMatrix) -> SuperMatrix {
        self.plus(&o.scaled(&q(-1)))
    }

    pub fn matmul(&self, o: &SuperMatrix) -> SuperMatrix {
        let mut rows_of_o: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
        for ((r, c), v) in &o.entries {
            rows_of_o.entry(*r).or_default().push((*c, v));
        }
        let mut m = Self::zero(self.n, self.n1);
        for ((r, k), a) in &self.entries {
            if let Some(row) = rows_of_o.get(k) {
                for (c, b) in row {
                    m.add_entry(*r, *c, &(a * *b));
                }
            }
        }
        m
    }

    pub fn supertrace(&self) -> Q {
        let mut s = Q::zero();
        for ((r, c), v) in &self.entries {
            if r == c {
                if self.index_odd(*r) {
                    s -= v;
                } else {
                    s += v;
                }
            }
        }
        s
    }

    /// `[a, b] = ab − (−1)^{p(a)p(b)} ba`, extended bilinearly over parity components.
    pub fn supercommutator(&self, o: &SuperMatrix) -> SuperMatrix {
        let mut out = Self::zero(self.n, self.n1);
        for pa in [false, true] {
            let a = self.parity_part(pa);
            if a.is_zero() {
                continue;
            }
            for pb in [false, true] {
                let b = o.parity_part(pb);
                if b.is_zero() {
                    continue;
                }
                let ab = a.matmul(&b);
                let ba = b.matmul(&a);
                out = if pa && pb { out.plus(&ab).plus(&ba) } else { out.plus(&ab).minus(&ba) };
            }
        }
        out
    }
}

/// Index of a centralizer basis element q^{(i,j)}_t: conformal weight `t`, block row `i`,
/// block column `j` (1-based), and its parity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenIndex {
    pub t: Half,
    pub i: u8,
    pub j: u8,
    pub odd: bool,
}

impl fmt::Display for GenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}^({},{})", self.t, self.i, self.j)
    }
}

impl fmt::Debug for GenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub size: u32,
    pub offset: usize,
    pub odd: bool,
}

/// The algebra together with its sl₂-triple and normalized invariant form.
#[derive(Debug, Clone)]
pub struct AlgebraCtx {
    spec: PartitionSpec,
    n: usize,
    n1: usize,
    blocks: Vec<Block>,
    block_of: Vec<usize>,
    x2: Vec<i32>,
    pub f: SuperMatrix,
    pub e: SuperMatrix,
    pub x: SuperMatrix,
    form_scale: Q,
}

pub fn build_algebra(spec: &PartitionSpec) -> Result<AlgebraCtx, SpecError> {
    let n = spec.n();
    let n1 = spec.n1();
    let d1 = spec.d1();
    let mut blocks = Vec::new();
    let mut block_of = Vec::new();
    let mut x2 = Vec::new();
    let mut offset = 0;
    for (b, &m) in spec.blocks().iter().enumerate() {
        blocks.push(Block { size: m, offset, odd: b >= d1 });
        for a in 1..=m as i32 {
            block_of.push(b);
            x2.push(m as i32 + 1 - 2 * a);
        }
        offset += m as usize;
    }
    let mut f = SuperMatrix::zero(n, n1);
    let mut e = SuperMatrix::zero(n, n1);
    let mut x = SuperMatrix::zero(n, n1);
    for bl in &blocks {
        let m = bl.size as usize;
        for a in 0..m {
            x.add_entry(bl.offset + a, bl.offset + a, &Q::new(BigInt::from(x2[bl.offset + a]), BigInt::from(2)));
        }
        for i in 1..m {
            f.add_entry(bl.offset + i, bl.offset + i - 1, &Q::one());
            e.add_entry(bl.offset + i - 1, bl.offset + i, &q((i * (m - i)) as i64));
        }
    }
    let st = e.matmul(&f).supertrace();
    if st.is_zero() {
        return Err(SpecError::NormalizationImpossible);
    }
    Ok(AlgebraCtx { spec: spec.clone(), n, n1, blocks, block_of, x2, f, e, x, form_scale: st.recip() })
}

impl AlgebraCtx {
    pub fn spec(&self) -> &PartitionSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Size of block `i` (1-based).
    pub fn m(&self, i: usize) -> u32 {
        self.blocks[i - 1].size
    }

    pub fn block_of(&self, r: usize) -> usize {
        self.block_of[r] + 1
    }

    /// The scaling `c` with `(a|b) = c·str(ab)`.
    pub fn form_scale(&self) -> &Q {
        &self.form_scale
    }

    pub fn zero(&self) -> SuperMatrix {
        SuperMatrix::zero(self.n, self.n1)
    }

    pub fn unit(&self, r: usize, c: usize) -> SuperMatrix {
        SuperMatrix::unit(self.n, self.n1, r, c)
    }

    /// e^{(i,j)}_{a,b} with 1-based block and in-block indices.
    pub fn block_unit(&self, i: usize, j: usize, a: usize, b: usize) -> SuperMatrix {
        let (bi, bj) = (&self.blocks[i - 1], &self.blocks[j - 1]);
        assert!(a >= 1 && a <= bi.size as usize && b >= 1 && b <= bj.size as usize, "block index out of range");
        self.unit(bi.offset + a - 1, bj.offset + b - 1)
    }

    pub fn block_pair_odd(&self, i: usize, j: usize) -> bool {
        self.blocks[i - 1].odd != self.blocks[j - 1].odd
    }

    pub fn gen(&self, t: Half, i: usize, j: usize) -> GenIndex {
        GenIndex { t, i: i as u8, j: j as u8, odd: self.block_pair_odd(i, j) }
    }

    pub fn entry_grade(&self, r: usize, c: usize) -> Half {
        Half::from_twice(self.x2[r] - self.x2[c])
    }

    /// ad x eigenvalue, when the matrix is an eigenvector.
    pub fn grade_of(&self, m: &SuperMatrix) -> Option<Half> {
        let mut it = m.entries.keys().map(|&(r, c)| self.entry_grade(r, c));
        let g = it.next()?;
        it.all(|h| h == g).then_some(g)
    }

    /// Part of `m` in ad x eigenvalue `g`.
    pub fn grade_part(&self, m: &SuperMatrix, g: Half) -> SuperMatrix {
        SuperMatrix {
            n: m.n,
            n1: m.n1,
            entries: m.entries.iter().filter(|((r, c), _)| self.entry_grade(*r, *c) == g).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    pub fn bracket(&self, a: &SuperMatrix, b: &SuperMatrix) -> SuperMatrix {
        a.supercommutator(b)
    }

    /// The normalized invariant form `(a|b) = c·str(ab)`.
    pub fn form(&self, a: &SuperMatrix, b: &SuperMatrix) -> Q {
        let mut s = Q::zero();
        for (&(r, c), v) in &a.entries {
            if let Some(w) = b.entries.get(&(c, r)) {
                if r >= self.n1 {
                    s -= v * w;
                } else {
                    s += v * w;
                }
            }
        }
        s * &self.form_scale
    }

    /// Flattened gl coordinate index.
    fn flat(&self, r: usize, c: usize) -> usize {
        r * self.n + c
    }

    fn from_flat(&self, v: &[Q]) -> SuperMatrix {
        let mut m = self.zero();
        for (k, x) in v.iter().enumerate() {
            if !x.is_zero() {
                m.entries.insert((k / self.n, k % self.n), x.clone());
            }
        }
        m
    }

    /// Rows of the linear map `M ↦ [y, M]` restricted to the columns in `cols`, plus the
    /// supertrace row when `traceless` is set.
    fn ad_rows(&self, y: &SuperMatrix, cols: &[(usize, usize)], traceless: bool) -> Vec<SparseVec<usize, Q>> {
        let mut rows: BTreeMap<usize, SparseVec<usize, Q>> = BTreeMap::new();
        for (k, &(r, c)) in cols.iter().enumerate() {
            let img = y.supercommutator(&self.unit(r, c));
            for (&(rr, cc), v) in &img.entries {
                rows.entry(self.flat(rr, cc)).or_default().insert(k, v.clone());
            }
        }
        let mut out: Vec<_> = rows.into_values().collect();
        if traceless {
            let tr: SparseVec<usize, Q> = cols
                .iter()
                .enumerate()
                .filter(|(_, (r, c))| r == c)
                .map(|(k, (r, _))| (k, if *r >= self.n1 { q(-1) } else { q(1) }))
                .collect();
            if !tr.is_empty() {
                out.push(tr);
            }
        }
        out
    }

    /// Matrix units of gl with ad x eigenvalue `g`.
    pub fn units_of_grade(&self, g: Half) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for r in 0..self.n {
            for c in 0..self.n {
                if self.entry_grade(r, c) == g {
                    v.push((r, c));
                }
            }
        }
        v
    }

    /// All ad x eigenvalues that occur in g, ascending.
    pub fn grades(&self) -> Vec<Half> {
        let mut g: Vec<Half> = (0..self.n).flat_map(|r| (0..self.n).map(move |c| (r, c))).map(|(r, c)| self.entry_grade(r, c)).collect();
        g.sort();
        g.dedup();
        g
    }

    /// dim g_i for every grade i of sl.
    pub fn grade_histogram(&self) -> BTreeMap<Half, usize> {
        let mut h = BTreeMap::new();
        for g in self.grades() {
            let mut k = self.units_of_grade(g).len();
            if g == Half::ZERO {
                k -= 1;
            }
            h.insert(g, k);
        }
        h
    }

    pub fn dim_g(&self) -> usize {
        self.n * self.n - 1
    }
}

/// Basis of g^f, dual basis of g^e and the extended families built from them.
#[derive(Debug, Clone)]
pub struct CentralizerData {
    pub gens: Vec<GenIndex>,
    pub basis_f: BTreeMap<GenIndex, SuperMatrix>,
    pub basis_e: BTreeMap<GenIndex, SuperMatrix>,
    /// q*[n] = (ad f)^n q*, for 0 ≤ n ≤ 2δ.
    pub ad_f_powers: BTreeMap<GenIndex, Vec<SuperMatrix>>,
    /// q[n], the dual family, for 0 ≤ n ≤ 2δ.
    pub dual_family: BTreeMap<GenIndex, Vec<SuperMatrix>>,
    pub delta: BTreeMap<GenIndex, Half>,
}

impl CentralizerData {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn weight(&self, g: &GenIndex) -> Half {
        g.t
    }

    /// 2δ as an integer.
    pub fn two_delta(&self, g: &GenIndex) -> usize {
        self.delta[g].twice() as usize
    }

    /// q_j[n], zero outside 0 ≤ n ≤ 2δ.
    pub fn q_n(&self, g: &GenIndex, n: usize) -> Option<&SuperMatrix> {
        self.dual_family.get(g).and_then(|v| v.get(n))
    }

    pub fn qstar_n(&self, g: &GenIndex, n: usize) -> Option<&SuperMatrix> {
        self.ad_f_powers.get(g).and_then(|v| v.get(n))
    }

    /// Coordinates of g^♯ in B^f, i.e. (q*_j | g) for every j.
    pub fn sharp_coords(&self, ctx: &AlgebraCtx, g: &SuperMatrix) -> BTreeMap<GenIndex, Q> {
        let mut out = BTreeMap::new();
        if g.is_zero() {
            return out;
        }
        for (j, qs) in &self.basis_e {
            let c = ctx.form(qs, g);
            if !c.is_zero() {
                out.insert(*j, c);
            }
        }
        out
    }

    /// Generators grouped by conformal weight.
    pub fn by_weight(&self) -> BTreeMap<Half, Vec<GenIndex>> {
        let mut m: BTreeMap<Half, Vec<GenIndex>> = BTreeMap::new();
        for g in &self.gens {
            m.entry(g.t).or_default().push(*g);
        }
        m
    }

    pub fn find(&self, t: Half, i: usize, j: usize) -> Option<GenIndex> {
        self.gens.iter().copied().find(|g| g.t == t && g.i as usize == i && g.j as usize == j)
    }
}

/// B^f from the closed formulas for the blocks.
pub fn centralizer_basis(ctx: &AlgebraCtx) -> CentralizerData {
    let d = ctx.blocks.len();
    let mut basis_f = BTreeMap::new();
    let mut delta = BTreeMap::new();
    let mut insert = |g: GenIndex, m: SuperMatrix| {
        delta.insert(g, g.t - Half::ONE);
        basis_f.insert(g, m);
    };
    for j in 1..=d {
        for l in 1..=d {
            let (mj, ml) = (ctx.m(j) as i32, ctx.m(l) as i32);
            if j == l {
                if j >= 2 {
                    let mut m = ctx.zero();
                    for i in 1..=ctx.m(1) as usize {
                        m = m.plus(&ctx.block_unit(1, 1, i, i).scaled(&q(mj as i64)));
                    }
                    let sign = if ctx.block_pair_odd(j, 1) { q(-1) } else { q(1) };
                    for i in 1..=mj as usize {
                        m = m.minus(&ctx.block_unit(j, j, i, i).scaled(&(q(ctx.m(1) as i64) * &sign)));
                    }
                    insert(ctx.gen(Half::ONE, j, j), m);
                }
                for t in 2..=mj {
                    let mut m = ctx.zero();
                    for i in 1..=(1 + mj - t) as usize {
                        m = m.plus(&ctx.block_unit(j, j, t as usize + i - 1, i));
                    }
                    insert(ctx.gen(Half::int(t), j, j), m);
                }
            } else {
                let diff2 = (mj - ml).abs();
                for tjl in 1..=mj.min(ml) {
                    // t = t_jl + |m_j − m_l|/2, kept doubled
                    let t2 = 2 * tjl + diff2;
                    let tp2 = t2 + (mj - ml);
                    let count2 = 2 + (mj + ml) - t2;
                    debug_assert!(tp2 % 2 == 0 && count2 % 2 == 0);
                    let (tp, count) = (tp2 / 2, count2 / 2);
                    let mut m = ctx.zero();
                    for i in 1..=count {
                        m = m.plus(&ctx.block_unit(j, l, (tp + i - 1) as usize, i as usize));
                    }
                    insert(ctx.gen(Half::from_twice(t2), j, l), m);
                }
            }
        }
    }
    CentralizerData {
        gens: basis_f.keys().copied().collect(),
        basis_f,
        basis_e: BTreeMap::new(),
        ad_f_powers: BTreeMap::new(),
        dual_family: BTreeMap::new(),
        delta,
    }
}

/// Echelon basis of ker(ad f) ∩ g, by Gaussian elimination over all of gl.
pub fn centralizer_oracle(ctx: &AlgebraCtx) -> Vec<SuperMatrix> {
    let cols: Vec<(usize, usize)> = (0..ctx.n).flat_map(|r| (0..ctx.n).map(move |c| (r, c))).collect();
    let rows = ctx.ad_rows(&ctx.f, &cols, true);
    nullspace(rows, cols.len()).into_iter().map(|v| ctx.from_flat(&v)).collect()
}

fn matrix_vec(ctx: &AlgebraCtx, m: &SuperMatrix) -> SparseVec<usize, Q> {
    m.entries.iter().map(|(&(r, c), v)| (ctx.flat(r, c), v.clone())).collect()
}

/// Whether two families of matrices span the same space.
pub fn same_span(ctx: &AlgebraCtx, a: &[SuperMatrix], b: &[SuperMatrix]) -> bool {
    let ra = rank(a.iter().map(|m| matrix_vec(ctx, m)));
    let rb = rank(b.iter().map(|m| matrix_vec(ctx, m)));
    let rab = rank(a.iter().chain(b).map(|m| matrix_vec(ctx, m)));
    ra == rb && rab == ra
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Completes `cdata` with B^e, q*[n] and q[n].
pub fn dual_bases(ctx: &AlgebraCtx, cdata: &CentralizerData) -> Result<CentralizerData, SpecError> {
    let mut out = cdata.clone();
    let mut by_delta: BTreeMap<Half, Vec<GenIndex>> = BTreeMap::new();
    for g in &cdata.gens {
        by_delta.entry(cdata.delta[g]).or_default().push(*g);
    }
    for (dl, gens) in &by_delta {
        let cols = ctx.units_of_grade(*dl);
        let rows = ctx.ad_rows(&ctx.e, &cols, *dl == Half::ZERO);
        let kernel: Vec<SuperMatrix> = nullspace(rows, cols.len())
            .into_iter()
            .map(|v| {
                let mut m = ctx.zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let (r, c) = cols[k];
                        m.add_entry(r, c, x);
                    }
                }
                m
            })
            .collect();
        if kernel.len() != gens.len() {
            return Err(SpecError::SingularPairing(*dl));
        }
        // q*_j = Σ_i C_ij b_i with Σ_i C_ij (b_i | q_k) = δ_jk
        let pairing: Vec<Vec<Q>> = kernel.iter().map(|b| gens.iter().map(|g| ctx.form(b, &cdata.basis_f[g])).collect()).collect();
        for (jj, g) in gens.iter().enumerate() {
            let mut ech = Echelon::<Q>::new(kernel.len());
            for k in 0..gens.len() {
                let row: SparseVec<usize, Q> = (0..kernel.len()).map(|i| (i, pairing[i][k].clone())).collect();
                let rhs = if k == jj { q(1) } else { q(0) };
                ech.add_equation(row, rhs).map_err(|_| SpecError::SingularPairing(*dl))?;
            }
            if ech.rank() != kernel.len() {
                return Err(SpecError::SingularPairing(*dl));
            }
            let c = ech.solve_zero_free();
            let mut qs = ctx.zero();
            for (i, b) in kernel.iter().enumerate() {
                qs = qs.plus(&b.scaled(&c[i]));
            }
            out.basis_e.insert(*g, qs);
        }
    }
    for g in &cdata.gens {
        let two_delta = cdata.delta[g].twice() as usize;
        let mut fam = vec![out.basis_e[g].clone()];
        for _ in 0..two_delta {
            let next = ctx.bracket(&ctx.f, fam.last().unwrap());
            fam.push(next);
        }
        out.ad_f_powers.insert(*g, fam);
        let mut dual = Vec::new();
        let mut cur = cdata.basis_f[g].clone();
        for n in 0..=two_delta {
            let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let den = factorial(n).pow(2) * binomial(two_delta, n);
            dual.push(cur.scaled(&Q::new(sign, den)));
            cur = ctx.bracket(&ctx.e, &cur);
        }
        out.dual_family.insert(*g, dual);
    }
    Ok(out)
}

/// g^♯: the g^f component along [g, e].
pub fn sharp_project(ctx: &AlgebraCtx, cdata: &CentralizerData, g: &SuperMatrix) -> SuperMatrix {
    let mut out = ctx.zero();
    for (j, c) in cdata.sharp_coords(ctx, g) {
        out = out.plus(&cdata.basis_f[&j].scaled(&c));
    }
    out
}

/// Pairs of extended-basis elements violating (q*_i[m] | q_j[n]) = δ_ij δ_mn.
pub fn biorthogonality_defects(ctx: &AlgebraCtx, cdata: &CentralizerData) -> Vec<(GenIndex, usize, GenIndex, usize, Q)> {
    let mut bad = Vec::new();
    for (i, stars) in &cdata.ad_f_powers {
        for (m, a) in stars.iter().enumerate() {
            for (j, duals) in &cdata.dual_family {
                for (n, b) in duals.iter().enumerate() {
                    let v = ctx.form(a, b);
                    let want = if i == j && m == n { q(1) } else { q(0) };
                    if v != want {
                        bad.push((*i, m, *j, n, v));
                    }
                }
            }
        }
    }
    bad
}

/// The algebra and its completed centralizer data.
#[derive(Debug, Clone)]
pub struct LieData {
    pub ctx: AlgebraCtx,
    pub cdata: CentralizerData,
}

impl LieData {
    pub fn new(spec: &PartitionSpec) -> Result<Self, SpecError> {
        let ctx = build_algebra(spec)?;
        let basis = centralizer_basis(&ctx);
        let cdata = dual_bases(&ctx, &basis)?;
        Ok(LieData { ctx, cdata })
    }
}

/// Σ_{i,j} min(m_i, m_j) − 1.
pub fn expected_centralizer_dim(spec: &PartitionSpec) -> usize {
    let b = spec.blocks();
    let mut s = 0usize;
    for x in &b {
        for y in &b {
            s += (*x).min(*y) as usize;
        }
    }
    s - 1
}
