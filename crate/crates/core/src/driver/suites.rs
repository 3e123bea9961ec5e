use super::certificates::{derive_s, kappa_times_rho, s_from_x};
use super::report::{Status, VerificationReport};
use super::{Family, IdentityRow};
use crate::arith::embedding_count;
use crate::error::Result;
use crate::gamma::{self, GammaConstantSet};
use crate::hecke::{compare_with, eliminate_at, eliminate_to_p, reconstruct_q, HeckeTable};
use crate::hyperseries::clausen_residual;
use crate::numkernel::{Mag, Precision, Rational};
use crate::padic::{gamma_p, gamma_p_int, PadicInt};
use crate::polys::{eval_quad, AppendixPolys, BiPolyQ, PolyQ, QuadElem, Var};
use crate::quaternion::{dim_sk, search_embeddings, EmbeddingSpec, BoundaryClass};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn pow5(k: u32) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(5), k as usize))
}

/// Residual limit used by the real-analytic suites: `2^{-400}` at 450 bits.
fn limit(prec: Precision) -> i64 {
    -(i64::from(prec.bits) - 50)
}

fn worst(id: &str, eq: &str, residuals: Vec<(String, Mag)>, lim: i64) -> VerificationReport {
    let (arg, m) = residuals.iter().max_by(|a, b| a.1.cmp(&b.1)).cloned().unwrap_or((String::new(), Mag::ZERO));
    let mut r = VerificationReport::residual(id, eq, m, lim);
    r.terms = residuals.len() as u64;
    r.note = Some(format!("{} cases, worst at {arg}", residuals.len()));
    r
}

/// Reflection, functional equation, Gauss multiplication (k <= 6), the
/// Gamma-product form of the Schwarzian constant and the period forms of
/// `C1` and `C2`.
pub fn gamma_suite(prec: Precision) -> Result<Vec<VerificationReport>> {
    let lim = limit(prec);
    let sample = gamma::sample_rationals(8);
    let mut out = Vec::new();
    let mut refl = Vec::new();
    let mut feq = Vec::new();
    for r in &sample {
        refl.push((r.to_string(), gamma::reflection_residual(r, prec)?));
        feq.push((r.to_string(), gamma::functional_equation_residual(r, prec)?));
    }
    out.push(worst("gamma", "reflection", refl, lim));
    out.push(worst("gamma", "functional", feq, lim));
    let mut gauss = Vec::new();
    for k in 2..=6 {
        for z in sample.iter().take(3) {
            gauss.push((format!("k={k} z={z}"), gamma::gauss_multiplication_residual(z, k, prec)?));
        }
    }
    out.push(worst("gamma", "multiplication", gauss, lim));
    let set = GammaConstantSet::compute(prec)?;
    out.push(VerificationReport::residual("gamma", "constant-C", set.c_lemma3.add(&set.c1).abs_upper(), lim));
    out.push(VerificationReport::residual("gamma", "squared-ratio", gamma::squared_ratio_residual(prec, false)?, lim));
    out.push(VerificationReport::residual("gamma", "C1-period", set.c1_from_period(prec)?.sub(&set.c1).abs_upper(), lim));
    out.push(VerificationReport::residual("gamma", "C2-period", set.c2_from_period(prec)?.sub(&set.c2).abs_upper(), lim));
    Ok(out)
}

/// Clausen's identity for both parameter sets at `count` random `x` with
/// `|x| <= 9/10`.
pub fn clausen_suite(prec: Precision, count: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Rational> = (0..count)
        .map(|_| {
            let den: i64 = rng.gen_range(2..=1000);
            let num: i64 = rng.gen_range(-(9 * den / 10)..=(9 * den / 10));
            q(num, den)
        })
        .collect();
    let lim = limit(prec);
    let mut out = Vec::new();
    for (a, b) in [(q(1, 24), q(5, 24)), (q(1, 24), q(7, 24))] {
        let mut res = Vec::new();
        for x in &xs {
            res.push((x.to_string(), clausen_residual(&a, &b, x, prec)?.abs_upper()));
        }
        out.push(worst("clausen", &format!("({a},{b})"), res, lim));
    }
    Ok(out)
}

/// Continuity, reflection sign law, functional equation and the Wilson-type
/// product for `Γ_p`, all as exact congruences.
pub fn gamma_p_suite(p: u64, k: u32, seed: u64) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let pk = |e: u32| num_traits::pow(BigInt::from(p), e as usize);

    let mut bad = Vec::new();
    for _ in 0..20 {
        let m: u64 = rng.gen_range(1..100_000);
        let e: u32 = rng.gen_range(1..=k / 2);
        let a = gamma_p_int(p, m, k)?;
        let b = gamma_p(p, &Rational::from_integer(BigInt::from(m) + pk(e)), k)?;
        if !a.congruent(&b, e) {
            bad.push(format!("m={m} e={e}"));
        }
        if e <= 8 && !a.congruent(&gamma_p_int(p, m + p.pow(e), k)?, e) {
            bad.push(format!("direct m={m} e={e}"));
        }
    }
    out.push(VerificationReport::check("gamma_p", "continuity", bad.is_empty(), bad.join(", ")));

    let args = [q(1, 3), q(2, 3), q(1, 4), q(3, 4), q(1, 6), q(5, 6), q(2, 7), q(3, 8), int(3), int(7)];
    let mut bad = Vec::new();
    for x in &args {
        let x0 = PadicInt::from_rational(x, p, 1)?.residue();
        let x0 = if x0.is_zero() { p as i64 } else { i64::try_from(x0).unwrap() };
        let lhs = gamma_p(p, x, k)?.mul(&gamma_p(p, &(int(1) - x), k)?);
        let rhs = PadicInt::from_int(&BigInt::from(if x0 % 2 == 0 { 1 } else { -1 }), p, k);
        if !lhs.congruent(&rhs, k) {
            bad.push(x.to_string());
        }
    }
    out.push(VerificationReport::check("gamma_p", "reflection", bad.is_empty(), bad.join(", ")));

    let mut bad = Vec::new();
    let fe_args = [q(2, 3), q(1, 3), q(3, 4), int(5), int(10), int(12)];
    for x in &fe_args {
        let g = gamma_p(p, x, k)?;
        let g1 = gamma_p(p, &(x + int(1)), k)?;
        let divisible = PadicInt::from_rational(x, p, 1)?.residue().is_zero();
        let rhs = if divisible { g.neg() } else { g.mul(&PadicInt::from_rational(x, p, k)?).neg() };
        if !g1.congruent(&rhs, k) {
            bad.push(x.to_string());
        }
    }
    for n in 1..40u64 {
        let g = gamma_p_int(p, n, k)?;
        let g1 = gamma_p_int(p, n + 1, k)?;
        let rhs = if n % p == 0 { g.neg() } else { g.mul(&PadicInt::from_int(&BigInt::from(n), p, k)).neg() };
        if g1 != rhs {
            bad.push(format!("n={n}"));
        }
    }
    out.push(VerificationReport::check("gamma_p", "functional", bad.is_empty(), bad.join(", ")));

    let mut bad = Vec::new();
    for e in 1..=6u32 {
        // Γ_p(p^e) = -∏_{0<j<p^e, p∤j} j
        let prod = gamma_p_int(p, p.pow(e), e)?.neg();
        if prod != PadicInt::from_int(&BigInt::from(-1), p, e) {
            bad.push(format!("e={e}"));
        }
    }
    out.push(VerificationReport::check("gamma_p", "wilson", bad.is_empty(), bad.join(", ")));
    Ok(out)
}

/// The seven coefficients of `Q(x, y)` in `y`, as printed.
pub fn expected_q_coefficients() -> Vec<PolyQ> {
    let lin = |c0: i64, c1: i64| PolyQ::new(vec![int(c0), int(c1)]);
    let sq = lin(14641, 138240);
    vec![
        PolyQ::constant(int(1)),
        PolyQ::constant(q(114, 125)),
        PolyQ::constant(q(-6333, 78125)),
        lin(-5177953, 8640000).scale(&(int(4) / pow5(11))),
        PolyQ::new(vec![int(1804020097), Rational::from_integer(BigInt::from(8467200000i64))]).scale(&(int(3) / pow5(15))),
        PolyQ::new(vec![int(-3501556201), Rational::from_integer(BigInt::from(93744000000i64))]).scale(&(int(726) / pow5(20))),
        (&sq * &sq).scale(&pow5(16).recip()),
    ]
}

/// One report per `y`-coefficient of `q` compared with the printed ones.
pub fn q_coefficient_reports(qq: &BiPolyQ) -> Vec<VerificationReport> {
    let cs = qq.coeffs_in(Var::Y);
    expected_q_coefficients()
        .iter()
        .enumerate()
        .map(|(k, want)| {
            let got = cs.get(k).and_then(|c| c.to_poly(Var::X).ok());
            let ok = got.as_ref() == Some(want);
            let note = if ok { String::new() } else { format!("got {}", got.map(|g| g.to_string()).unwrap_or_default()) };
            VerificationReport::check("hecke", format!("Q[y^{k}]"), ok, note)
        })
        .chain(std::iter::once(VerificationReport::check("hecke", "Q degree", cs.len() == 7, "")))
        .collect()
}

/// Reconstruction of `Q` from the Hecke table and elimination to `P_5`.
pub fn hecke_suite(polys: &AppendixPolys) -> Result<(Vec<VerificationReport>, BiPolyQ)> {
    let qq = reconstruct_q()?;
    let mut out = q_coefficient_reports(&qq);
    let el = eliminate_to_p(&qq)?;
    let p5 = polys.get(5).expect("P5 is shipped");
    let cmp = compare_with(&el, p5);
    out.push(VerificationReport::check("hecke", "P5 | res", cmp.divides_resultant, ""));
    let cof = match (&cmp.cofactor, cmp.equals_primitive) {
        (_, true) => "cofactor 1".to_string(),
        (Some(c), false) => format!("cofactor {c}"),
        (None, false) => "P5 does not divide the primitive part".to_string(),
    };
    out.push(VerificationReport::check("hecke", "prim(res) = P5", cmp.equals_primitive, cof));
    out.push(VerificationReport::check("hecke", "content in x only", !el.content.uses(Var::Z), format!("content has degree {} in x", el.content.degree(Var::X).unwrap_or(0))));
    let x0 = q(-2401, 3375);
    let at = eliminate_at(&qq, &x0)?;
    let roots = at.rational_roots();
    let ok = roots.contains(&q(2250, 6517)) && p5.eval_var(Var::X, &x0).to_poly(Var::Z)?.rational_roots() == vec![q(2250, 6517)];
    out.push(VerificationReport::check("hecke", "evaluated route", ok, format!("rational roots {:?}", roots.iter().map(|r| r.to_string()).collect::<Vec<_>>())));
    Ok((out, el.primitive))
}

/// The two pinned root certificates and the closing of the `S'` chain.
pub fn root_suite(rows: &[IdentityRow], polys: &AppendixPolys) -> Result<Vec<VerificationReport>> {
    let p5 = polys.get(5).expect("P5 is shipped");
    let mut out = Vec::new();
    let t120 = q(-2401, 3375);
    let roots = p5.eval_var(Var::X, &t120).to_poly(Var::Z)?.rational_roots();
    out.push(VerificationReport::check(
        "roots",
        "P5(t_-120, z)",
        roots == vec![q(2250, 6517)],
        format!("rational roots {:?}", roots.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
    ));
    let t19 = q(-2187, 1024);
    let rho = QuadElem::new(-19, q(512 * 19, 60021), q(512, 60021));
    let vanish = eval_quad(p5, &t19, &rho)?.is_zero() && eval_quad(p5, &t19, &rho.conj())?.is_zero();
    out.push(VerificationReport::check("roots", "P5(t_-19, rho)", vanish, format!("rho = {rho}")));
    let x = kappa_times_rho(-19, &rho)?;
    let closes = x.b.is_zero() && x.a == q(10240, 60021) && s_from_x(&t19, &x.a) == q(15309, 15808);
    out.push(VerificationReport::check("roots", "S' chain", closes, format!("kappa rho = {x}")));
    let find = |d: i64| rows.iter().find(|r| r.d.d == d);
    let show = |s: &Option<Rational>| s.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "missing".into());
    let s120 = find(-120).map(|r| derive_s(r).s);
    let s19 = find(-19).map(|r| derive_s(r).s);
    let ok = s120 == Some(q(2250, 6517)) && s19 == Some(q(15309, 15808));
    out.push(VerificationReport::check("roots", "derive_S", ok, format!("S = {}, S' = {}", show(&s120), show(&s19))));
    Ok(out)
}

/// The boundary class a row's CM point should land in.
pub fn expected_class(row: &IdentityRow) -> BoundaryClass {
    match (row.family, row.m.is_positive()) {
        (_, false) => BoundaryClass::NegativeArc,
        (Family::A, true) => BoundaryClass::Segment01,
        (Family::B, true) => BoundaryClass::Ray1Inf,
    }
}

/// Optimal embeddings of the row's order whose fixed point lies on one of
/// the three boundary pieces.
pub fn table_embedding(row: &IdentityRow) -> Result<Vec<EmbeddingSpec>> {
    let d = row.d.d;
    let bound = 2 * ((-d) as f64).sqrt() as i64 + 8;
    let mut out = Vec::new();
    for class in [BoundaryClass::Segment01, BoundaryClass::Ray1Inf, BoundaryClass::NegativeArc] {
        out.extend(search_embeddings(d, class, bound)?);
    }
    Ok(out)
}

/// Weight dimensions, embedding counts and the boundary classes of the CM
/// points.
pub fn structural_suite(rows: &[IdentityRow]) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let table = HeckeTable::embedded()?;
    let mut bad = Vec::new();
    for k in (8..=48).step_by(8) {
        let d = dim_sk(k)? as usize;
        let ok = table.matrix(k).is_some_and(|m| m.len() == d && m.iter().all(|r| r.len() == d));
        if !ok {
            bad.push(format!("k={k}"));
        }
    }
    out.push(VerificationReport::check("structure", "dim S_k", bad.is_empty(), bad.join(", ")));
    let mut bad = Vec::new();
    for r in rows.iter().filter(|r| r.d.is_fundamental) {
        let c = embedding_count(r.d)?;
        if c != 1 {
            bad.push(format!("{}: {c}", r.d.d));
        }
    }
    out.push(VerificationReport::check("structure", "embedding count", bad.is_empty(), bad.join(", ")));
    for r in rows {
        let found = table_embedding(r)?;
        let rep = if found.is_empty() {
            let mut v = VerificationReport::check(r.id(), "boundary class", true, "no embedding reconstructed");
            v.status = Status::Info;
            v
        } else {
            let want = expected_class(r);
            let classes: Vec<String> = found.iter().map(|e| format!("{} ({}, {}, {})", e.lemma5_classify(), e.a1(), e.a2(), e.a3())).collect();
            let ok = found.len() == 1 && found[0].lemma5_classify() == want;
            VerificationReport::check(r.id(), "boundary class", ok, classes.join("; "))
        };
        out.push(rep);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::IdentityTable;

    #[test]
    fn q_matches_print() {
        let qq = reconstruct_q().unwrap();
        assert!(q_coefficient_reports(&qq).iter().all(|r| r.status == Status::Pass));
        let bumped = HeckeTable::embedded().unwrap().with_entry(24, 1, 1, int(14267407)).unwrap();
        let q2 = crate::hecke::newton_to_q(&crate::hecke::power_sum_polys(&bumped).unwrap());
        assert!(q_coefficient_reports(&q2).iter().any(|r| r.status == Status::Fail));
    }

    #[test]
    fn pinned_roots() {
        let rows = crate::driver::load_tables().unwrap();
        let r = root_suite(&rows, AppendixPolys::embedded().unwrap()).unwrap();
        assert!(r.iter().all(|x| x.status == Status::Pass), "{:?}", r);
    }

    #[test]
    fn gamma_p_properties() {
        let r = gamma_p_suite(5, 40, 7).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|x| x.status == Status::Pass), "{:?}", r);
    }

    #[test]
    fn boundary_classes() {
        let t = IdentityTable::embedded().unwrap();
        let rows: Vec<_> = t.rows.iter().filter(|r| [-120, -19, -52, -84].contains(&r.d.d)).cloned().collect();
        let r = structural_suite(&rows).unwrap();
        assert!(r.iter().all(|x| x.status == Status::Pass), "{:?}", r);
        let e = table_embedding(t.row(-120, None).unwrap()).unwrap();
        assert_eq!((e[0].a1().clone(), e[0].a2().clone(), e[0].a3().clone()), (int(12), int(-2), int(2)));
    }

    #[test]
    fn clausen_small() {
        let prec = Precision::new(120, 30).unwrap();
        let r = clausen_suite(prec, 3, 1).unwrap();
        assert!(r.iter().all(|x| x.status == Status::Pass), "{:?}", r);
    }
}
