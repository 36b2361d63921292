use walgebra::coeff::{q, qf};
use walgebra::liestruct::*;
use walgebra::Half;

fn specs() -> Vec<PartitionSpec> {
    vec![
        PartitionSpec::plain(&[2]).unwrap(),
        PartitionSpec::plain(&[3]).unwrap(),
        PartitionSpec::plain(&[2, 1]).unwrap(),
        PartitionSpec::plain(&[2, 2]).unwrap(),
        PartitionSpec::plain(&[2, 1, 1]).unwrap(),
        PartitionSpec::plain(&[3, 2]).unwrap(),
        PartitionSpec::plain(&[4, 2]).unwrap(),
        PartitionSpec::plain(&[4, 3]).unwrap(),
        PartitionSpec::superalg(&[2], &[1]).unwrap(),
        PartitionSpec::superalg(&[3], &[2]).unwrap(),
        PartitionSpec::superalg(&[4], &[2]).unwrap(),
        PartitionSpec::superalg(&[3, 1], &[2]).unwrap(),
    ]
}

#[test]
fn sl2_identities_hold() {
    for spec in specs() {
        let ctx = build_algebra(&spec).unwrap();
        let two_x = ctx.x.scaled(&q(2));
        assert_eq!(ctx.bracket(&ctx.e, &ctx.f), two_x, "{spec}");
        assert_eq!(ctx.bracket(&ctx.x, &ctx.e), ctx.e, "{spec}");
        assert_eq!(ctx.bracket(&ctx.x, &ctx.f), ctx.f.scaled(&q(-1)), "{spec}");
        assert_eq!(ctx.form(&ctx.e, &ctx.f), q(1));
        assert_eq!(ctx.form(&two_x, &two_x), q(2));
        assert_eq!(ctx.grade_of(&ctx.f), Some(Half::int(-1)));
        assert_eq!(ctx.grade_of(&ctx.e), Some(Half::int(1)));
    }
}

#[test]
fn plain_21_triple() {
    let ctx = build_algebra(&PartitionSpec::plain(&[2, 1]).unwrap()).unwrap();
    assert_eq!(ctx.n(), 3);
    assert_eq!(ctx.f, ctx.block_unit(1, 1, 2, 1));
    assert_eq!(ctx.e, ctx.block_unit(1, 1, 1, 2));
    let mut x = ctx.zero();
    x.add_entry(0, 0, &qf(1, 2));
    x.add_entry(1, 1, &qf(-1, 2));
    assert_eq!(ctx.x, x);
}

#[test]
fn principal_3_e() {
    let ctx = build_algebra(&PartitionSpec::plain(&[3]).unwrap()).unwrap();
    let e = ctx.unit(0, 1).scaled(&q(2)).plus(&ctx.unit(1, 2).scaled(&q(2)));
    assert_eq!(ctx.e, e);
}

#[test]
fn degenerate_super_normalization() {
    let spec = PartitionSpec::superalg(&[2, 2, 2, 2], &[3, 1]).unwrap();
    assert_eq!(build_algebra(&spec).unwrap_err(), SpecError::NormalizationImpossible);
    assert!(matches!(PartitionSpec::superalg(&[2], &[2]), Err(SpecError::SuperEqualParts(2))));
}

#[test]
fn basis_21_matches_closed_forms() {
    let ctx = build_algebra(&PartitionSpec::plain(&[2, 1]).unwrap()).unwrap();
    let c = centralizer_basis(&ctx);
    assert_eq!(c.len(), 4);
    let g = |t: Half, i, j| c.basis_f[&ctx.gen(t, i, j)].clone();
    assert_eq!(g(Half::int(2), 1, 1), ctx.block_unit(1, 1, 2, 1));
    let h = ctx.block_unit(1, 1, 1, 1).plus(&ctx.block_unit(1, 1, 2, 2)).minus(&ctx.block_unit(2, 2, 1, 1).scaled(&q(2)));
    assert_eq!(g(Half::int(1), 2, 2), h);
    assert_eq!(g(Half::from_twice(3), 1, 2), ctx.block_unit(1, 2, 2, 1));
    assert_eq!(g(Half::from_twice(3), 2, 1), ctx.block_unit(2, 1, 1, 1));
}

#[test]
fn centralizer_dimension_and_span() {
    let mut all = specs();
    all.push(PartitionSpec::plain(&[6, 4, 3]).unwrap());
    for spec in all {
        let ctx = build_algebra(&spec).unwrap();
        let c = centralizer_basis(&ctx);
        assert_eq!(c.len(), expected_centralizer_dim(&spec), "{spec}");
        for m in c.basis_f.values() {
            assert!(ctx.bracket(&ctx.f, m).is_zero());
            assert!(m.supertrace() == q(0));
        }
        let oracle = centralizer_oracle(&ctx);
        assert_eq!(oracle.len(), c.len());
        let ours: Vec<_> = c.basis_f.values().cloned().collect();
        assert!(same_span(&ctx, &ours, &oracle), "{spec}");
    }
}

#[test]
fn biorthogonal_extended_bases() {
    for spec in specs() {
        let ld = LieData::new(&spec).unwrap();
        assert!(biorthogonality_defects(&ld.ctx, &ld.cdata).is_empty(), "{spec}");
    }
}
