use std::collections::BTreeSet;
use std::sync::Arc;

use walgebra::coeff::{q, qf};
use walgebra::liestruct::{LieData, PartitionSpec};
use walgebra::pvacore::{check_skew, DiffPoly, LambdaPoly};
use walgebra::wbracket::*;
use walgebra::{Coeff, GenIndex, Half, KPoly, RatFunc, Q};

fn plain(p: &[u32]) -> Arc<LieData> {
    Arc::new(LieData::new(&PartitionSpec::plain(p).unwrap()).unwrap())
}

fn sup(p1: &[u32], p2: &[u32]) -> Arc<LieData> {
    Arc::new(LieData::new(&PartitionSpec::superalg(p1, p2).unwrap()).unwrap())
}

/// Every subset of the window nodes whose strata climb in steps of at least one.
fn brute_force_chains(ld: &LieData, t1: Half, t2: Half) -> BTreeSet<Chain> {
    let window: Vec<ChainIndex> = chain_nodes(ld).into_iter().filter(|n| n.alpha >= -t2 && n.alpha <= t1 - Half::ONE).collect();
    assert!(window.len() < 22, "window too large for brute force");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << window.len()) {
        let chain: Chain = (0..window.len()).filter(|i| mask >> i & 1 == 1).map(|i| window[i]).collect();
        if chain.windows(2).all(|w| w[1].alpha - w[0].alpha >= Half::ONE) {
            out.insert(chain);
        }
    }
    out
}

#[test]
fn chains_match_brute_force() {
    for ld in [plain(&[2]), plain(&[3]), plain(&[2, 1]), sup(&[2], &[1])] {
        for a in &ld.cdata.gens {
            for b in &ld.cdata.gens {
                let (t1, t2) = (a.t, b.t);
                let ours = enumerate_chains(&ld, t1, t2);
                let set: BTreeSet<Chain> = ours.iter().cloned().collect();
                assert_eq!(set.len(), ours.len(), "duplicate chains");
                assert_eq!(set, brute_force_chains(&ld, t1, t2), "{} {a} {b}", ld.ctx.spec());
                assert!(ours[0].is_empty());
            }
        }
    }
}

#[test]
fn sl2_window_is_minus_one_to_zero() {
    let ld = plain(&[2]);
    let f = ld.cdata.gens[0];
    let singles: Vec<Half> = enumerate_chains(&ld, f.t - Half::ONE, f.t - Half::ONE).iter().filter(|c| c.len() == 1).map(|c| c[0].alpha).collect();
    assert_eq!(singles, [Half::int(-1), Half::ZERO]);
}

#[test]
fn chain_nodes_sit_in_their_grades() {
    for ld in [plain(&[3, 2]), sup(&[3], &[2])] {
        for nd in chain_nodes(&ld) {
            let qn = ld.cdata.q_n(&nd.j, nd.n).unwrap();
            assert_eq!(ld.ctx.grade_of(qn), Some(nd.alpha));
            let qs = ld.cdata.qstar_n(&nd.j, nd.n).unwrap();
            assert_eq!(ld.ctx.grade_of(qs), Some(-nd.alpha));
        }
    }
}

#[test]
fn sl2_closed_form() {
    let ld = plain(&[2]);
    let f = ld.cdata.gens[0];
    let x = DiffPoly::<GenIndex, Q>::var(f);
    let b: LambdaPoly<GenIndex, Q> = master_bracket(&ld, SignConvention::SELECTED, &f, &f);
    let mut expect = LambdaPoly::constant(x.partial());
    expect.add_at(1, &x.scale(&q(2)));
    expect.add_at(3, &DiffPoly::constant(qf(-1, 2)));
    assert_eq!(b, expect);

    // symbolically the central term is cubic in k̃
    let s: LambdaPoly<GenIndex, KPoly> = master_bracket(&ld, SignConvention::SELECTED, &f, &f);
    let central = s.get(3).coeff_of(&walgebra::pvacore::Monomial::one());
    assert_eq!(central, KPoly::monomial(qf(-1, 2), 3));
    assert_eq!(s.get(1).linear_term()[&f], KPoly::monomial(q(2), 1));
}

#[test]
fn weights_bound_lambda_degree() {
    for ld in [plain(&[3, 2]), plain(&[2, 2]), sup(&[3], &[2])] {
        let t: MasterTable<Q> = bracket_table(&ld, SignConvention::SELECTED);
        for a in t.gens() {
            for b in t.gens() {
                let br = t.bracket(a, b);
                let total = a.t + b.t;
                if let Some(d) = br.degree() {
                    assert!(Half::int(d as i32 + 1) <= total, "{a} {b}");
                }
                for (n, c) in br.coeffs().iter().enumerate() {
                    if let Some(w) = c.weight_of().unwrap() {
                        assert_eq!(w, total - Half::int(n as i32 + 1), "{a} {b} λ^{n}");
                    }
                    assert_eq!(c.parity().unwrap_or(a.odd ^ b.odd), a.odd ^ b.odd);
                }
            }
        }
    }
}

#[test]
fn fixed_table_is_symbolic_table_at_one() {
    for ld in [plain(&[3, 2]), sup(&[2], &[1])] {
        let fixed: MasterTable<Q> = bracket_table(&ld, SignConvention::SELECTED);
        let sym: MasterTable<RatFunc> = bracket_table(&ld, SignConvention::SELECTED);
        for a in fixed.gens() {
            for b in fixed.gens() {
                let at_one = sym.bracket(a, b).try_map_coeffs(|c| c.eval_one()).unwrap();
                assert_eq!(at_one, *fixed.bracket(a, b), "{a} {b}");
            }
        }
    }
}

#[test]
fn only_selected_convention_is_skew_on_super() {
    let ld = sup(&[3], &[2]);
    let mut passing = Vec::new();
    for conv in SignConvention::candidates() {
        let t: MasterTable<Q> = bracket_table(&ld, conv);
        if check_skew(&t, &ld.cdata.gens).unwrap().is_empty() {
            passing.push(conv);
        }
    }
    assert!(passing.contains(&SignConvention::SELECTED));
    // on even algebras every convention agrees
    let ld = plain(&[2, 1]);
    let base: MasterTable<Q> = bracket_table(&ld, SignConvention::SELECTED);
    for conv in SignConvention::candidates() {
        let t: MasterTable<Q> = bracket_table(&ld, conv);
        for a in t.gens() {
            for b in t.gens() {
                assert_eq!(t.bracket(a, b), base.bracket(a, b));
            }
        }
    }
}

#[test]
fn conformal_vector_central_term() {
    for ld in [plain(&[2]), plain(&[3]), plain(&[2, 1]), plain(&[3, 2]), sup(&[2], &[1]), sup(&[3], &[2])] {
        let t: MasterTable<Q> = bracket_table(&ld, SignConvention::SELECTED);
        let l = conformal_vector::<Q>(&ld);
        let rep = conformal_check(&t, &l, t.gens()).unwrap();
        assert!(rep.passes(), "{}", ld.ctx.spec());
        assert_eq!(rep.central, DiffPoly::constant(qf(-1, 2)), "{}", ld.ctx.spec());
    }
}

#[test]
fn omega_sharp_of_basis_is_the_generator() {
    let ld = plain(&[3, 2]);
    let t: MasterTable<Q> = MasterTable::new(ld.clone(), SignConvention::SELECTED);
    for (g, m) in &ld.cdata.basis_f {
        assert_eq!(t.omega_sharp(m), DiffPoly::var(*g));
    }
    // e = [x, e] lies in [g, e]
    assert!(t.omega_sharp(&ld.ctx.e).is_zero());
}
