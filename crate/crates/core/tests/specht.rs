use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vecfield::exact::{monomials, rat, ratio, MPoly, Rat, UPoly};
use vecfield::pbw::RationalSeries;
use vecfield::specht::{
    closure_basis, embed, homogeneous_split, infinitesimal_act, module_route_dims, power_field,
    substitute, substitution_closed, tspace_series, variables,
};
use vecfield::tensormod::{act_e, ModuleDescriptor, ModuleElement};

fn random_poly(rng: &mut StdRng, n: usize, max_deg: u32, terms: usize) -> MPoly {
    let mut f = MPoly::with_vars(variables(n));
    while f.is_zero() {
        for _ in 0..terms {
            let ms = monomials(n, rng.gen_range(0..=max_deg));
            f.add_term(
                ms[rng.gen_range(0..ms.len())].clone(),
                ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
            );
        }
    }
    f
}

fn random_substitution(rng: &mut StdRng) -> MPoly {
    let c: Vec<Rat> = std::iter::once(rat(0))
        .chain((0..3).map(|_| ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))))
        .collect();
    MPoly::univariate("t", &c)
}

#[test]
fn closure_of_x_in_one_variable() {
    let x = MPoly::var(&["x1"], 0);
    let ts = closure_basis(1, &[x], 12).unwrap();
    for d in 1..=12 {
        assert_eq!(ts.graded_basis[&d], vec![MPoly::var(&["x1"], 0).pow(d)]);
    }
    let s = tspace_series(&ts);
    let expect =
        RationalSeries::new(UPoly::from_ints(&[0, 1]), UPoly::from_ints(&[1, -1])).unwrap();
    assert_eq!(s.fit, Some(expect));
}

#[test]
fn closure_of_x1_in_two_variables() {
    let x1 = embed(&MPoly::var(&["x1"], 0), 2).unwrap();
    let ts = closure_basis(2, std::slice::from_ref(&x1), 10).unwrap();
    let series = tspace_series(&ts);
    let fit = series.fit.unwrap();
    let brute = module_route_dims(2, &[x1], 10).unwrap();
    let coeffs = fit.coefficients(11);
    for (c, b) in coeffs.iter().zip(&brute) {
        assert_eq!(*c, rat(*b as i64));
    }
}

#[test]
fn constants_only() {
    let ts = closure_basis(3, &[MPoly::constant(rat(4))], 6).unwrap();
    assert_eq!(ts.dims(), vec![1, 0, 0, 0, 0, 0, 0]);
}

#[test]
fn closure_is_idempotent() {
    let mut rng = StdRng::seed_from_u64(2);
    let gens: Vec<MPoly> = (0..2).map(|_| random_poly(&mut rng, 2, 3, 3)).collect();
    let ts = closure_basis(2, &gens, 8).unwrap();
    let basis: Vec<MPoly> = ts.graded_basis.values().flatten().cloned().collect();
    let again = closure_basis(2, &basis, 8).unwrap();
    assert_eq!(again.dims(), ts.dims());
}

#[test]
fn split_components_lie_in_closure() {
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..5 {
        let f = random_poly(&mut rng, 3, 4, 4);
        let degrees: Vec<u32> = f.homogeneous_components().keys().copied().collect();
        let split = homogeneous_split(&f, &degrees).unwrap();
        let sum = split
            .components
            .iter()
            .fold(MPoly::with_vars(variables(3)), |a, c| &a + c);
        assert_eq!(sum, f);
        let ts = closure_basis(3, std::slice::from_ref(&f), 6).unwrap();
        for c in &split.components {
            assert!(ts.contains_truncated(c).unwrap());
        }
    }
}

#[test]
fn infinitesimal_matches_module_action() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let f = random_poly(&mut rng, n, 4, 3);
        let d = ModuleDescriptor::zero(n);
        let m =
            ModuleElement::from_terms(&d, f.terms().iter().map(|(e, c)| (e.clone(), c.clone())))
                .unwrap();
        let k = rng.gen_range(1..=4);
        let via_module = act_e(k, &m).unwrap();
        let via_field = infinitesimal_act(&power_field(k), &f).unwrap();
        let lifted = MPoly::from_terms(
            variables(n),
            via_module
                .terms()
                .iter()
                .map(|(e, c)| (e.clone(), c.clone())),
        );
        assert_eq!(via_field, lifted);
    }
}

#[test]
fn closure_agrees_with_module_route() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..5 {
        let n = rng.gen_range(1..=3);
        let gens: Vec<MPoly> = (0..rng.gen_range(1..=2))
            .map(|_| random_poly(&mut rng, n, 3, 3))
            .collect();
        let ts = closure_basis(n, &gens, 8).unwrap();
        assert_eq!(ts.dims(), module_route_dims(n, &gens, 8).unwrap());
    }
}

#[test]
fn substitution_spot_check() {
    let mut rng = StdRng::seed_from_u64(21);
    let x1 = MPoly::var(&["x1", "x2"], 0);
    let x2 = MPoly::var(&["x1", "x2"], 1);
    let gens = [&x1 - &x2, &(&x1 * &x2) + &x1];
    let ts = closure_basis(2, &gens, 7).unwrap();
    for _ in 0..20 {
        let p = random_substitution(&mut rng);
        assert!(substitution_closed(&ts, &p).unwrap());
    }
}

#[test]
fn substitute_examples() {
    let x = MPoly::var(&["x1"], 0);
    let t2 = MPoly::univariate("t", &[rat(0), rat(0), rat(1)]);
    assert_eq!(substitute(&x, &t2).unwrap(), x.pow(2));
    assert!(substitute(&x, &MPoly::univariate("t", &[rat(1), rat(1)])).is_err());
}
