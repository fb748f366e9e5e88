use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vecfield::exact::{monomials, rat, ratio, MPoly, Rat, UPoly};
use vecfield::homology::{homology_table, Coefficients, TableOptions};
use vecfield::liealg::{basis_of_weight, bracket, AlgebraDescriptor, LieElement, VFBasis};
use vecfield::pbw::{
    hilbert_report, hilbert_series, partial_sum_polynomial, PolyModulePresentation, RationalSeries,
};
use vecfield::spanning::{
    phi, span_certificate, spanning_generators, verify_graded_basis, verify_spanning, SearchConfig,
};
use vecfield::specht::{
    closure_basis, module_route_dims, substitution_closed, tspace_series, variables,
};
use vecfield::tensormod::{
    decompose_coinduced, decomposition_graded_dim, module_axiom_check, weight_support,
    ModuleDescriptor, ModuleElement,
};

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_rat(rng: &mut StdRng) -> Rat {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn random_params(rng: &mut StdRng, r: usize) -> (Vec<Rat>, Vec<Rat>) {
    let l = (0..r).map(|_| random_rat(rng)).collect();
    let m = (0..r).map(|_| random_rat(rng)).collect();
    (l, m)
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn jacobi(a: &LieElement, b: &LieElement, c: &LieElement) -> Result<bool, vecfield::Error> {
    let x = bracket(a, &bracket(b, c)?)?;
    let y = bracket(b, &bracket(c, a)?)?;
    let z = bracket(c, &bracket(a, b)?)?;
    Ok(x.add(&y).add(&z).is_zero())
}

fn random_field(rng: &mut StdRng, n: usize) -> LieElement {
    let mut u = LieElement::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let ms = monomials(n, rng.gen_range(0..=3));
        let a = ms[rng.gen_range(0..ms.len())].clone();
        u.add_term(VFBasis::new(a, rng.gen_range(0..n)), random_rat(rng));
    }
    u
}

fn lie_axioms() -> Check {
    let alg = AlgebraDescriptor::full(2);
    let basis: Vec<LieElement> = (-1..=4)
        .flat_map(|w| basis_of_weight(&alg, w))
        .map(LieElement::basis)
        .collect();
    for a in &basis {
        for b in &basis {
            let ab = bracket(a, b).map_err(|e| e.to_string())?;
            ensure(ab == bracket(b, a).unwrap().scale(&rat(-1)), || {
                format!("antisymmetry {a} {b}")
            })?;
            for c in &basis {
                ensure(jacobi(a, b, c).map_err(|e| e.to_string())?, || {
                    format!("jacobi {a} {b} {c}")
                })?;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(101);
    for _ in 0..100 {
        let (a, b, c) = (
            random_field(&mut rng, 3),
            random_field(&mut rng, 3),
            random_field(&mut rng, 3),
        );
        ensure(jacobi(&a, &b, &c).map_err(|e| e.to_string())?, || {
            format!("jacobi in W_3 {a} {b} {c}")
        })?;
    }
    Ok(())
}

fn module_axiom() -> Check {
    let mut rng = StdRng::seed_from_u64(102);
    for _ in 0..50 {
        let r = rng.gen_range(1..=3);
        let (l, m) = random_params(&mut rng, r);
        let d = ModuleDescriptor::new(l, m).map_err(|e| e.to_string())?;
        let terms: Vec<(Vec<u32>, Rat)> = (0..4)
            .map(|_| {
                let ms = monomials(r, rng.gen_range(0..=8));
                (ms[rng.gen_range(0..ms.len())].clone(), random_rat(&mut rng))
            })
            .collect();
        let v = ModuleElement::from_terms(&d, terms).map_err(|e| e.to_string())?;
        for k in 1..=6 {
            for j in 1..=6 {
                let ok = module_axiom_check(&LieElement::e(k), &LieElement::e(j), &v)
                    .map_err(|e| e.to_string())?;
                ensure(ok, || format!("module axiom k={k} m={j} r={r}"))?;
            }
        }
    }
    Ok(())
}

fn phi_checks() -> Check {
    let mut rng = StdRng::seed_from_u64(103);
    let n = MPoly::var(&["N"], 0);
    for _ in 0..10 {
        let (l, m) = random_params(&mut rng, 1);
        let expect = &n + &MPoly::constant(&m[0] + &l[0] * rat(2));
        ensure(
            phi(1, &l, &m, 6).map_err(|e| e.to_string())? == expect,
            || "closed form for r = 1".into(),
        )?;
    }
    for r in 1..=3 {
        for _ in 0..10 {
            let (l, m) = random_params(&mut rng, r);
            let p = phi(r, &l, &m, 6).map_err(|e| e.to_string())?;
            let lead = p.leading_term().map(|(_, c)| c.abs());
            ensure(lead.as_ref().is_some_and(|c| c.is_one()), || {
                format!("leading coefficient of phi_{r} is {lead:?}")
            })?;
        }
    }
    Ok(())
}

fn newton_case() -> Check {
    for r in 1..=5 {
        let zero = vec![rat(0); r];
        for n in 1..=3 {
            ensure(
                verify_graded_basis(r, &zero, &zero, &vec![n; r], r as u32 + 4),
                || format!("r={r} N={n}"),
            )?;
        }
    }
    Ok(())
}

fn spanning_pipeline() -> Check {
    let mut rng = StdRng::seed_from_u64(105);
    let c = SearchConfig {
        bound: 30,
        cutoff: 10,
    };
    for r in 1..=3 {
        for _ in 0..10 {
            let (l, m) = random_params(&mut rng, r);
            let s = spanning_generators(r, &l, &m, &c).map_err(|e| format!("r={r}: {e}"))?;
            ensure(verify_spanning(&s, &l, &m, 10), || {
                format!("spanning r={r} {l:?} {m:?}")
            })?;
        }
    }
    let c = SearchConfig {
        bound: 6,
        cutoff: 8,
    };
    for r in 1..=2 {
        for _ in 0..3 {
            let (l, m) = random_params(&mut rng, r);
            let cert = span_certificate(r, &l, &m, 2, &c).map_err(|e| format!("L_2 r={r}: {e}"))?;
            ensure(cert.verified, || format!("L_2 span r={r} {l:?} {m:?}"))?;
        }
    }
    Ok(())
}

/// Partitions of w into parts from 1..=r.
fn partitions_bounded(w: usize, r: usize) -> Vec<u64> {
    let mut p = vec![0u64; w + 1];
    p[0] = 1;
    for part in 1..=r {
        for i in part..=w {
            p[i] += p[i - part];
        }
    }
    p
}

fn hilbert() -> Check {
    let mut rng = StdRng::seed_from_u64(106);
    let c = SearchConfig {
        bound: 6,
        cutoff: 12,
    };
    for r in 1..=3 {
        let (l, m) = random_params(&mut rng, r);
        let d = ModuleDescriptor::new(l.clone(), m.clone()).map_err(|e| e.to_string())?;
        let s = spanning_generators(r, &l, &m, &c).map_err(|e| e.to_string())?;
        let rep = hilbert_report(&d, &s, 12).map_err(|e| e.to_string())?;
        let coeffs = rep.series.coefficients(13);
        for (w, got) in coeffs.iter().enumerate() {
            let want = binom((w + r - 1) as u64, (r - 1) as u64);
            ensure(*got == rat(want as i64), || {
                format!("r={r} w={w}: {got} vs {want}")
            })?;
        }
        let fit = partial_sum_polynomial(&rep.series, 13).map_err(|e| e.to_string())?;
        ensure(fit.degree == r && fit.c == BigInt::one(), || {
            format!("partial sums r={r}: c={} d={}", fit.c, fit.degree)
        })?;
    }
    for r in 1..=4 {
        let weights: Vec<u32> = (1..=r as u32).collect();
        let p = PolyModulePresentation::free(weights.clone(), vec![0]);
        let s = hilbert_series(&p);
        ensure(s == RationalSeries::free(&weights), || {
            format!("free series r={r}")
        })?;
        let oracle = partitions_bounded(12, r);
        for (w, got) in s.coefficients(13).iter().enumerate() {
            ensure(*got == rat(oracle[w] as i64), || {
                format!("free coefficient r={r} w={w}")
            })?;
        }
    }
    Ok(())
}

fn homology_window() -> Check {
    let t = homology_table(
        &AlgebraDescriptor::truncated(1, 1),
        &Coefficients::Trivial,
        2,
        10,
        &TableOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let nz: Vec<_> = t.nonzero().into_iter().collect();
    let want = vec![
        ((0, 0), 1),
        ((1, 1), 1),
        ((1, 2), 1),
        ((2, 5), 1),
        ((2, 7), 1),
    ];
    ensure(nz == want, || format!("nonzero cells {nz:?}"))?;
    ensure(t.d_squared_zero(), || "d^2 != 0".into())
}

fn finiteness() -> Check {
    let cases = [
        (AlgebraDescriptor::truncated(2, 1), Coefficients::Trivial),
        (
            AlgebraDescriptor::truncated(1, 1),
            "T:1:0"
                .parse()
                .map_err(|e: vecfield::Error| e.to_string())?,
        ),
    ];
    for (alg, c) in &cases {
        let t =
            homology_table(alg, c, 2, 8, &TableOptions::default()).map_err(|e| e.to_string())?;
        ensure(t.slices.len() == 3 * 9, || {
            format!("{alg} {c}: missing slices")
        })?;
        ensure(t.d_squared_zero(), || format!("{alg} {c}: d^2 != 0"))?;
        ensure(!t.euler.is_empty() && t.euler_ok(), || {
            format!("{alg} {c}: Euler characteristic")
        })?;
    }
    Ok(())
}

fn specht() -> Check {
    let x = MPoly::var(&["x1"], 0);
    let ts = closure_basis(1, &[x], 12).map_err(|e| e.to_string())?;
    let s = tspace_series(&ts);
    let expect =
        RationalSeries::new(UPoly::from_ints(&[0, 1]), UPoly::from_ints(&[1, -1])).unwrap();
    ensure(s.fit.as_ref() == Some(&expect), || {
        format!("series {:?}", s.fit_text)
    })?;
    ensure(
        ts.dims()
            == std::iter::once(0)
                .chain(std::iter::repeat_n(1, 12))
                .collect::<Vec<_>>(),
        || format!("dims {:?}", ts.dims()),
    )?;

    let mut rng = StdRng::seed_from_u64(109);
    for _ in 0..5 {
        let n = rng.gen_range(1..=3);
        let mut gens = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let mut f = MPoly::with_vars(variables(n));
            while f.is_zero() {
                for _ in 0..3 {
                    let ms = monomials(n, rng.gen_range(0..=3));
                    f.add_term(ms[rng.gen_range(0..ms.len())].clone(), random_rat(&mut rng));
                }
            }
            gens.push(f);
        }
        let ts = closure_basis(n, &gens, 8).map_err(|e| e.to_string())?;
        let route = module_route_dims(n, &gens, 8).map_err(|e| e.to_string())?;
        ensure(ts.dims() == route, || {
            format!("closure {:?} vs module route {route:?}", ts.dims())
        })?;
        for _ in 0..4 {
            let c: Vec<Rat> = std::iter::once(rat(0))
                .chain((0..3).map(|_| random_rat(&mut rng)))
                .collect();
            let p = MPoly::univariate("t", &c);
            ensure(
                substitution_closed(&ts, &p).map_err(|e| e.to_string())?,
                || format!("substitution {p}"),
            )?;
        }
    }
    Ok(())
}

fn weyl_dim(lambda: &[i64]) -> usize {
    let n = lambda.len();
    let (mut num, mut den) = (1i64, 1i64);
    for i in 0..n {
        for j in i + 1..n {
            num *= lambda[i] - lambda[j] + (j - i) as i64;
            den *= (j - i) as i64;
        }
    }
    (num / den) as usize
}

fn dominant(n: usize, top: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for a in (0..=top).rev() {
        for mut rest in dominant(n - 1, a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

fn weights() -> Check {
    for n in 2..=3 {
        for lambda in dominant(n, 3) {
            let total: usize = weight_support(&lambda, n)
                .map_err(|e| e.to_string())?
                .iter()
                .map(|w| w.multiplicity)
                .sum();
            let want = weyl_dim(&lambda);
            ensure(total == want, || format!("{lambda:?}: {total} vs {want}"))?;
            let parts = decompose_coinduced(&lambda, n).map_err(|e| e.to_string())?;
            for w in 0..=6u32 {
                let sym = binom(w as u64 + n as u64 - 1, n as u64 - 1);
                let got = decomposition_graded_dim(&parts, w);
                ensure(got == sym * want as u64, || {
                    format!("{lambda:?} w={w}: {got}")
                })?;
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("lie axioms", 10, lie_axioms),
        ("module axiom", 30, module_axiom),
        ("phi leading coefficient", 60, phi_checks),
        ("newton basis case", 120, newton_case),
        ("spanning pipeline", 300, spanning_pipeline),
        ("hilbert series", 120, hilbert),
        ("homology window", 120, homology_window),
        ("finite homology and euler", 180, finiteness),
        ("specht closure", 120, specht),
        ("weight support", 60, weights),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|_| {
            ensure(took < Duration::from_secs(limit), || {
                format!("took {took:.1?}, limit {limit}s")
            })
        });
        match outcome {
            Ok(()) => println!("[PASS] {:>2} {name} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {:>2} {name} ({took:.2?}): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
