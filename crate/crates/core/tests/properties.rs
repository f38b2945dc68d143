use vlab_core::center::{center_window, default_window, hc_generators, leading_form_matches, veldkamp_check};
use vlab_core::poisson::PoissonContext;
use vlab_core::sym::invariant_generators;
use vlab_core::{LieAlgebra, PrimeContext};

fn hypothesis_algebras() -> Vec<LieAlgebra> {
    let sl2 = LieAlgebra::sl(2).unwrap();
    vec![
        LieAlgebra::heisenberg(),
        sl2.clone(),
        LieAlgebra::takiff(&sl2, &[2]).unwrap(),
        LieAlgebra::semidirect(&sl2, None).unwrap(),
    ]
}

#[test]
fn free_over_p_center_for_hypothesis_algebras() {
    for alg in hypothesis_algebras() {
        let f_list = invariant_generators(&alg, 4).unwrap();
        let degrees: Vec<u32> = f_list.iter().map(|f| f.degree().unwrap()).collect();
        for p in [5u64, 7, 11] {
            let ctx = PrimeContext::new(&alg, p).unwrap();
            let hc = hc_generators(&ctx, &f_list).unwrap();
            let d = default_window(p, &degrees);
            let w = center_window(&ctx.env, d).unwrap();
            let v = veldkamp_check(&ctx, &hc, &w);
            assert!(v.holds_in_window, "{} p={p} D={d}: {:?}", alg.name(), v.verdict());
        }
    }
}

#[test]
fn solvable_remark_family_has_spanning_defects() {
    for (n, m) in [(1u32, 1u32), (1, 2), (2, 3), (3, 1)] {
        let alg = LieAlgebra::remark_solvable(n, m).unwrap();
        let f_list = invariant_generators(&alg, 4).unwrap();
        assert!(f_list.is_empty());
        for p in [5u64, 7, 11] {
            let ctx = PrimeContext::new(&alg, p).unwrap();
            let hc = hc_generators(&ctx, &f_list).unwrap();
            let w = center_window(&ctx.env, p as u32 + 1).unwrap();
            let v = veldkamp_check(&ctx, &hc, &w);
            assert!(!v.spanning_defect.is_empty(), "({n},{m}) p={p}");
            assert!(!v.holds_in_window);
        }
    }
}

#[test]
fn harish_chandra_leading_forms_reduce() {
    let mut algs = hypothesis_algebras();
    algs.push(LieAlgebra::sl(3).unwrap());
    for alg in algs {
        let f_list = invariant_generators(&alg, 4).unwrap();
        for p in [5u64, 7, 11, 13] {
            let ctx = PrimeContext::new(&alg, p).unwrap();
            let hc = hc_generators(&ctx, &f_list).unwrap();
            for (g, f) in hc.gens.iter().zip(&f_list) {
                assert!(ctx.env.is_central(g), "{} p={p}", alg.name());
                assert!(leading_form_matches(&ctx.field, g, f), "{} p={p}", alg.name());
            }
        }
    }
}

#[test]
fn harish_chandra_generators_are_poisson_central() {
    for alg in [LieAlgebra::sl(2).unwrap(), LieAlgebra::heisenberg()] {
        let f_list = invariant_generators(&alg, 4).unwrap();
        for p in [3u64, 5, 7] {
            let ctx = PrimeContext::new(&alg, p).unwrap();
            let hc = hc_generators(&ctx, &f_list).unwrap();
            let w = center_window(&ctx.env, p as u32 + 1).unwrap();
            let pc = PoissonContext::new(&ctx).unwrap();
            for g in &hc.gens {
                for u in &w.basis {
                    assert!(pc.bracket(g, u).unwrap().is_zero(), "{} p={p}", alg.name());
                }
            }
        }
    }
}
