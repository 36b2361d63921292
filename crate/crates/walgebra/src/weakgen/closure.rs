use serde::{Deserialize, Serialize};

use super::engine::{EngineCoeff, Request, Store};
use super::{DerivationReport, WeakGenError};
use crate::half::Half;
use crate::liestruct::{GenIndex, LieData};
use crate::wbracket::{MasterTable, WPoly};

/// Bounds on a closure search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Products of higher weight are discarded.
    pub max_weight: Half,
    /// Largest n used in an n-th product.
    pub max_n: usize,
    /// Largest number of kept elements, seeds included.
    pub max_elements: usize,
}

/// max weight = largest generator weight + 2, max n = twice that (rounded up),
/// max elements = 4·|J^f| + 16.
pub fn default_caps(ld: &LieData) -> Caps {
    let top = ld.cdata.gens.iter().map(|g| g.t).max().unwrap_or(Half::ONE);
    let max_weight = top + Half::int(2);
    Caps { max_weight, max_n: max_weight.twice().max(0) as usize, max_elements: 4 * ld.cdata.len() + 16 }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub caps: Caps,
    pub generations: usize,
    /// Whether the element cap stopped the search before a fixpoint.
    pub truncated: bool,
    pub derivation: DerivationReport,
}

impl ClosureReport {
    pub fn complete(&self) -> bool {
        self.derivation.complete
    }
}

/// Breadth-first closure of `seeds` under n-th products.
///
/// A product is kept only if its linear part enlarges the span at its weight, so at
/// most one element per recovered direction survives. Pairs are unordered: b_(n)a
/// has the same linear part as ±a_(n)b up to total derivatives.
pub fn closure_search<C: EngineCoeff>(table: &MasterTable<C>, seeds: &[(String, WPoly<C>)], caps: Caps) -> Result<ClosureReport, WeakGenError> {
    let ld = table.lie();
    let mut store = Store::new(ld);
    let mut kept = Vec::new();
    for (label, e) in seeds {
        let (id, _) = store.seed(label.clone(), e.clone())?;
        kept.push(id);
    }
    let mut frontier_from = 0;
    let mut generations = 0;
    let mut truncated = false;
    while frontier_from < kept.len() && !store.complete() {
        if kept.len() >= caps.max_elements {
            truncated = true;
            break;
        }
        generations += 1;
        let mut reqs = Vec::new();
        for y in frontier_from..kept.len() {
            for x in 0..=y {
                let (a, b) = (kept[x], kept[y]);
                let total = store.nodes[a].weight + store.nodes[b].weight;
                for n in 0..=caps.max_n {
                    let w = total - Half::int(n as i32 + 1);
                    if w <= Half::ZERO {
                        break;
                    }
                    if w > caps.max_weight {
                        continue;
                    }
                    let targets: Vec<GenIndex> = ld.cdata.gens.iter().filter(|g| g.t == w && !store.recovered(g)).copied().collect();
                    if !targets.is_empty() {
                        reqs.push(Request { left: a, right: b, n, rule: "closure", targets, tag: 0 });
                    }
                }
            }
        }
        frontier_from = kept.len();
        for (_, id, grew) in store.run(table, reqs)? {
            if grew && kept.len() < caps.max_elements {
                kept.push(id);
            }
        }
    }
    let labels = seeds.iter().map(|(l, _)| l.clone()).collect();
    Ok(ClosureReport { caps, generations, truncated, derivation: store.report("closure".into(), labels) })
}
