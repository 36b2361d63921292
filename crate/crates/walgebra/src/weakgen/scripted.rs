//! Weak generation schedules for the big and small sets, replayed as product templates.
//!
//! Each template is one kind of step from the proofs, indexed over blocks:
//! - `pair`: q^{(j,j+1)}_s (n) q^{(j+1,j)}_{s'} for adjacent blocks, landing on diagonal weights
//! - `lower`: a weight-2 diagonal element (2) an off-diagonal one, one weight down
//! - `raise`: a weight-2 diagonal element (0) an off-diagonal one, one weight up
//! - `join`: (0)-product of lowest off-diagonals (a,b) and (c,a), giving (c,b)
//! - `cube`: q_3^{(l,l)} (3) q_3^{(l,l)}, giving weight 2 (small sets only)
//! - `lift`: q_3^{(j,j)} (1) anything in block row or column j, one weight up (small sets only)
//!
//! Templates fire only when their inputs are available and some target is still
//! missing, and rounds repeat until nothing new can fire.

use std::collections::BTreeMap;

use super::engine::{EngineCoeff, Request, Store};
use super::{weak_set, DerivationReport, Flavor, WeakGenError};
use crate::half::Half;
use crate::liestruct::{GenIndex, LieData};
use crate::pvacore::DiffPoly;
use crate::wbracket::{MasterTable, WPoly};

fn diag(ld: &LieData, blocks: &[usize], t: Half) -> Vec<GenIndex> {
    blocks.iter().filter_map(|&x| ld.cdata.find(t, x, x)).collect()
}

fn nonneg(h: Half) -> Option<usize> {
    (h >= Half::ZERO).then(|| h.as_int().map(|n| n as usize)).flatten()
}

/// Lowest available representative in the off-diagonal family (a, b).
fn lowest<C: EngineCoeff>(store: &Store<'_, C>, a: usize, b: usize) -> Option<(Half, usize)> {
    store.reps.iter().find(|(g, _)| g.i as usize == a && g.j as usize == b).map(|(g, &id)| (g.t, id))
}

fn requests<C: EngineCoeff>(store: &Store<'_, C>, flavor: Flavor, w2: &BTreeMap<usize, usize>) -> Vec<Request> {
    let ld = store.ld;
    let ctx = &ld.ctx;
    let d = ctx.blocks().len();
    let m = |i: usize| ctx.m(i);
    let mut out = Vec::new();
    let mut push = |left: usize, right: usize, n: usize, rule: &'static str, targets: Vec<GenIndex>, tag: usize| {
        if !targets.is_empty() && targets.iter().any(|g| !store.recovered(g)) && !store.done(left, right, n) {
            out.push(Request { left, right, n, rule, targets, tag });
        }
    };

    // pair products over adjacent blocks
    for j in 1..d {
        let (lo, hi) = (m(j).min(m(j + 1)), m(j).max(m(j + 1)));
        let base = match flavor {
            Flavor::Big => Half::from_twice((m(j) + m(j + 1)) as i32) - Half::ONE,
            Flavor::Small => Half::from_twice((hi - lo) as i32) + Half::ONE,
        };
        let ts: Vec<i32> = match flavor {
            Flavor::Big => (1..=hi as i32).collect(),
            Flavor::Small => vec![1, 2, 3],
        };
        // big sets pair equal weights, plus (top, top−1) when the blocks are equal;
        // small sets use all four pairings of the two lowest weights
        let pairings: Vec<(Half, Half)> = match flavor {
            Flavor::Big if lo == hi => vec![(base + Half::ONE, base + Half::ONE), (base, base), (base + Half::ONE, base)],
            Flavor::Big => vec![(base + Half::ONE, base + Half::ONE), (base, base)],
            Flavor::Small => vec![(base, base), (base, base + Half::ONE), (base + Half::ONE, base), (base + Half::ONE, base + Half::ONE)],
        };
        for (s, s2) in pairings {
            {
                let (Some(l), Some(r)) = (store.rep_at(s, j, j + 1), store.rep_at(s2, j + 1, j)) else { continue };
                for &t in &ts {
                    let t = Half::int(t);
                    let Some(n) = nonneg(s + s2 - Half::ONE - t) else { continue };
                    push(l, r, n, "pair", diag(ld, &[j, j + 1], t), j);
                }
            }
        }
    }

    // weight-2 diagonal elements acting on off-diagonal families
    let offdiag: Vec<(GenIndex, usize)> = store.reps.iter().filter(|(g, _)| g.i != g.j).map(|(g, &id)| (*g, id)).collect();
    for &(g, id) in &offdiag {
        let (a, b) = (g.i as usize, g.j as usize);
        let mut lefts: Vec<usize> = [a, b].iter().filter_map(|&x| store.rep_at(Half::int(2), x, x)).collect();
        if let Some(&w) = w2.get(&a.min(b)) {
            if a.abs_diff(b) == 1 {
                lefts.push(w);
            }
        }
        let down = ld.cdata.find(g.t - Half::ONE, a, b);
        let up = ld.cdata.find(g.t + Half::ONE, a, b);
        for &l in &lefts {
            if let Some(t) = down {
                push(l, id, 2, "lower", vec![t], 0);
            }
            if let Some(t) = up {
                push(l, id, 0, "raise", vec![t], 0);
            }
        }
        if flavor == Flavor::Small {
            for x in [a, b] {
                if let (Some(l), Some(t)) = (store.rep_at(Half::int(3), x, x), up) {
                    push(l, id, 1, "lift", vec![t], 0);
                }
            }
        }
    }

    // joins of lowest off-diagonals
    for a in 1..=d {
        for b in (1..=d).filter(|&b| b != a) {
            let Some((x, l)) = lowest(store, a, b) else { continue };
            for c in (1..=d).filter(|&c| c != a && c != b) {
                let Some((y, r)) = lowest(store, c, a) else { continue };
                if let Some(t) = ld.cdata.find(x + y - Half::ONE, c, b) {
                    push(l, r, 0, "join", vec![t], 0);
                }
            }
        }
    }

    if flavor == Flavor::Small {
        let all2 = diag(ld, &(1..=d).collect::<Vec<_>>(), Half::int(2));
        for x in 1..=d {
            let Some(p) = store.rep_at(Half::int(3), x, x) else { continue };
            push(p, p, 3, "cube", all2.clone(), 0);
            let diag_reps: Vec<(GenIndex, usize)> = store.reps.iter().filter(|(g, _)| g.i as usize == x && g.j as usize == x).map(|(g, &id)| (*g, id)).collect();
            for (g, id) in diag_reps {
                if let Some(t) = ld.cdata.find(g.t + Half::ONE, x, x) {
                    push(p, id, 1, "lift", vec![t], 0);
                }
            }
        }
    }
    out
}

/// Replays the schedule of the big or small weak generating set.
pub fn scripted_verify<C: EngineCoeff>(table: &MasterTable<C>, flavor: Flavor) -> Result<DerivationReport, WeakGenError> {
    let ld = table.lie();
    let seeds = weak_set(ld, flavor)?;
    let mut store = Store::new(ld);
    for g in &seeds {
        store.seed(format!("ω({g})"), DiffPoly::var(*g))?;
    }
    // the first weight-2 pair product of each adjacent pair stands in for the
    // diagonal weight-2 generators until those are recovered
    let mut w2: BTreeMap<usize, usize> = BTreeMap::new();
    while !store.complete() {
        let reqs = requests(&store, flavor, &w2);
        if reqs.is_empty() {
            break;
        }
        for (req, id, _) in store.run(table, reqs)? {
            let node = &store.nodes[id];
            if req.rule == "pair" && node.weight == Half::int(2) && !node.linear.is_empty() {
                w2.entry(req.tag).or_insert(id);
            }
        }
    }
    Ok(store.report(format!("scripted-{}", flavor.name()), seeds.iter().map(|g| format!("ω({g})")).collect()))
}

/// The reduced seed sets of the rectangular case: d elements, some of them differences
/// of two generators of equal weight.
pub fn preset_seeds<C: EngineCoeff>(ld: &LieData, flavor: Flavor) -> Result<Vec<(String, WPoly<C>)>, WeakGenError> {
    let ctx = &ld.ctx;
    let d = ctx.blocks().len();
    let m = ctx.m(1);
    if d < 2 || ctx.blocks().iter().any(|b| b.size != m) {
        return Err(WeakGenError::ScheduleInapplicable(format!("{}: presets need a rectangular partition", ctx.spec())));
    }
    let get = |t: i32, i: usize, j: usize| {
        ld.cdata
            .find(Half::int(t), i, j)
            .ok_or_else(|| WeakGenError::ScheduleInapplicable(format!("{}: q{}^({},{}) does not exist", ctx.spec(), t, i, j)))
    };
    let (first, second, top) = match flavor {
        Flavor::Big => (get(m as i32 - 1, 2, 1)?, get(m as i32, 1, 2)?, m as i32),
        Flavor::Small => (get(2, 2, 1)?, get(1, 1, 2)?, 1),
    };
    let mut out = vec![(format!("ω({first})"), DiffPoly::var(first)), (format!("ω({second})"), DiffPoly::var(second))];
    for i in 2..d {
        let (a, b) = (get(top, i, i + 1)?, get(top, i + 1, 1)?);
        if a.odd != b.odd {
            return Err(WeakGenError::ScheduleInapplicable(format!("{}: {a} − {b} mixes parities", ctx.spec())));
        }
        out.push((format!("ω({a} − {b})"), DiffPoly::var(a).minus(&DiffPoly::var(b))));
    }
    Ok(out)
}
