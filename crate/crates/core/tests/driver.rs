use x6star::driver::*;
use x6star::hecke::HeckeTable;
use x6star::hyperseries::{partial_sum_exact, sum_linear};
use x6star::numkernel::{BigReal, Precision};
use x6star::polys::AppendixPolys;

fn midpoint_log2_residual(lhs: &BigReal, rhs: &BigReal) -> i64 {
    let d = BigReal::from_rational(&lhs.to_rational(), lhs.prec()).sub(&BigReal::from_rational(&rhs.to_rational(), rhs.prec()));
    d.value_mag_up().div(rhs.value_mag_down()).log2_ceil().unwrap_or(i64::MIN)
}

#[test]
fn residuals_are_stable_when_terms_double() {
    let prec = Precision::DEFAULT;
    let consts = ArchConstants::compute(prec).unwrap();
    let table = IdentityTable::embedded().unwrap();
    for (d, fam) in [(-120, Family::A), (-19, Family::B), (-148, Family::A), (-408, Family::B)] {
        let row = table.row(d, Some(fam)).unwrap();
        for primed in [false, true] {
            let spec = row.series(primed);
            let n = sum_linear(&spec, prec).unwrap().terms;
            let wp = prec.working();
            let rhs = table_rhs(row, primed, consts.for_family(fam), wp).unwrap();
            let once = BigReal::from_rational(&partial_sum_exact(&spec, n), wp);
            let twice = BigReal::from_rational(&partial_sum_exact(&spec, 2 * n), wp);
            let (a, b) = (midpoint_log2_residual(&once, &rhs), midpoint_log2_residual(&twice, &rhs));
            assert!((a - b).abs() <= 1, "{} primed={primed}: 2^{a} vs 2^{b}", row.id());
            assert!(a < -400);
        }
    }
}

#[test]
fn escalation_keeps_the_verdicts() {
    let table = IdentityTable::embedded().unwrap();
    let rep = escalation_check(&table.rows, Precision::DEFAULT, 64).unwrap();
    assert_eq!(rep.status, Status::Pass, "{}", rep.human());
}

#[test]
fn reports_serialize_with_the_documented_fields() {
    let consts = ArchConstants::compute(Precision::new(200, 40).unwrap()).unwrap();
    let row = IdentityTable::embedded().unwrap().row(-40, None).unwrap();
    let [u, _] = verify_archimedean(row, &consts).unwrap();
    let v: serde_json::Value = serde_json::from_str(&u.to_json()).unwrap();
    for key in ["id", "family", "equation", "lhs", "rhs", "residual_exponent", "terms", "ms", "status"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["status"], "pass");
    let [p, _] = verify_padic(row, 5, 20, 4).unwrap();
    let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
    assert!(v.get("padic_digits").is_some() && v.get("residual_exponent").is_none());
}

#[test]
fn data_files_round_trip() {
    let polys = AppendixPolys::embedded().unwrap();
    assert_eq!(&AppendixPolys::parse("copy", &polys.to_text()).unwrap(), polys);
    let hecke = HeckeTable::embedded().unwrap();
    assert!(hecke.weights().contains(&48));
    let text = include_str!("../data/identities.txt");
    let tampered = text.replacen("row -120 A proved -2401", "row -120 A proved -2400", 1);
    assert!(IdentityTable::parse("identities.txt", &tampered).is_err());
}

#[test]
fn certificates_cover_the_pinned_rows() {
    let table = IdentityTable::embedded().unwrap();
    let polys = AppendixPolys::embedded().unwrap();
    let mut certified = Vec::new();
    for row in &table.rows {
        let c = certify_root(&derive_s(row), polys).unwrap();
        if let Some(q) = c.q {
            certified.push((c.id(), q));
        }
    }
    for want in [("A-120", 5), ("B-19", 5)] {
        assert!(certified.iter().any(|(id, q)| id == want.0 && *q == want.1), "{certified:?}");
    }
}
