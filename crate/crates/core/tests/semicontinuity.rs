//! Points in special position fail the prediction that a general set of the
//! same size satisfies. Twelve points cut on an elliptic quartic by three
//! planes lie on the product of those planes, a cubic outside the curve's
//! ideal, so the ideal gains a generator in degree 3 that a general set lacks.

use syzlab::curves::{affine_points, make_curve, sample_points, CurveKind, PointSample};
use syzlab::exactla::{Matrix, PrimeField};
use syzlab::koszul::betti_table;
use syzlab::mrc::{assess, predict_table, CurveContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 1009;

fn dot(f: &PrimeField, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

#[test]
fn hyperplane_sections_exceed_the_general_table() {
    let f = PrimeField::new(P).unwrap();
    let model = make_curve(CurveKind::Elliptic, 3, 4, P, 1).unwrap();
    let ctx = CurveContext::new(&model).unwrap();
    let affine: Vec<Vec<u32>> = affine_points(f, model.weierstrass.unwrap()).into_iter().map(|q| model.point_at(q)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // Three planes, each meeting the quartic in four distinct affine points
    // (so none passes through the origin of the group law).
    let mut points: Vec<Vec<u32>> = Vec::new();
    while points.len() < 12 {
        let picks: Vec<&Vec<u32>> = (0..3).map(|_| &affine[rng.gen_range(0..affine.len())]).collect();
        let rows: Vec<Vec<u32>> = picks.iter().map(|v| v.to_vec()).collect();
        let normals = Matrix::from_rows(f, &rows).kernel();
        if normals.dim() != 1 {
            continue;
        }
        let h = normals.basis().row(0);
        let on: Vec<&Vec<u32>> = affine.iter().filter(|v| dot(&f, h, v) == 0).collect();
        let fresh = on.iter().all(|v| !points.contains(v));
        if on.len() == 4 && fresh {
            points.extend(on.into_iter().cloned());
        }
    }

    let sample = PointSample::from_points(f, 3, points).unwrap();
    let inst = ctx.instance(&model, 12).unwrap();
    assert_eq!(inst.u, 4);
    let predicted = predict_table(&inst, &ctx.table).unwrap();
    let computed = betti_table(&sample, inst.u + 1).unwrap();
    let verdict = assess(&predicted, computed);
    assert!(!verdict.matched());
    // The general table has no cubic generators; the special one has exactly one.
    assert_eq!(predicted.get(1, 2), 0);
    assert_eq!(verdict.computed.get(1, 2), 1);
    // A general set of 12 points imposes independent conditions on cubics.
    let general = betti_table(&sample_points(&model, 12, 1).unwrap(), inst.u + 1).unwrap();
    assert_eq!(general.get(1, 2), 0);
}
