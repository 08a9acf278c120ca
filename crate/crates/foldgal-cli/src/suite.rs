//! Fast self-checks behind `foldgal verify`.

use foldgal::adlv::{self, YWindow};
use foldgal::conj;
use foldgal::construct;
use foldgal::eaw::ExtAffine;
use foldgal::gallery::{self, ChimneySpec, Gallery, Orientation};
use foldgal::newton;
use foldgal::{Kind, RootDatum, Q};

fn check(name: &str, f: impl FnOnce() -> foldgal::Result<bool>) -> bool {
    let ok = matches!(f(), Ok(true));
    println!("{} {name}", if ok { "PASS" } else { "FAIL" });
    ok
}

pub fn run(cap: usize) -> bool {
    let mut ok = true;
    ok &= check("C2 invariants of t^[0,3] and t^(2a1v+3a2v) s1", || {
        let rd = RootDatum::new(Kind::C, 2)?;
        let three_w2 = vec![Q::from_integer(0), Q::from_integer(3)];
        let a = newton::classify(&rd, &ExtAffine::parse(&rd, "t^[0,3]")?);
        let lam: Vec<i64> =
            (0..2).map(|k| 2 * rd.simple_coroot(1)[k] + 3 * rd.simple_coroot(2)[k]).collect();
        let b = newton::classify(&rd, &ExtAffine::new(lam, rd.s(1)));
        Ok(a.nu == three_w2 && a.integral && !a.kappa.is_zero() && b.nu == three_w2 && b.kappa.is_zero() && !b.integral)
    });
    ok &= check("A3 parity obstruction for s1s3", || {
        let rd = RootDatum::new(Kind::A, 3)?;
        let b = ExtAffine::parse(&rd, "t^[1,0,1]*s1s3")?;
        let inv = newton::classify(&rd, &b);
        let singles = (1..=3).all(|i| conj::fills_out(&rd, &rd.s(i)).holds);
        Ok(newton::check_standard_rep(&rd, &b, &inv) && !conj::fills_out(&rd, &rd.s(1).mul(&rd.s(3))).holds && singles)
    });
    ok &= check("averaging identities in A2 and G2", || {
        let mut all = true;
        for kind in [Kind::A, Kind::G] {
            let rd = RootDatum::new(kind, 2)?;
            all &= rd.elements().iter().all(|w| newton::averaging_identities(&rd, w).iter().all(|&b| b));
        }
        Ok(all)
    });
    ok &= check("A2 lambda=(3,3) certificate replayed by enumeration", || {
        let rd = RootDatum::new(Kind::A, 2)?;
        let cert = construct::certify(&rd, &[3, 3], 1, None)?;
        Ok(adlv::verify_certificate(&rd, &cert, Some(cap))?.holds())
    });
    ok &= check("A2 translation dimension for lambda=(3,3), mu=(1,1)", || {
        let rd = RootDatum::new(Kind::A, 2)?;
        let x0 = ExtAffine::new(vec![3, 3], rd.w0());
        let b = ExtAffine::translation(vec![1, 1]);
        let lb = adlv::dimension_lb(&rd, &x0, &b, &YWindow::single(ExtAffine::spherical(rd.w0())), cap)?;
        Ok(lb.is_some_and(|d| d.lower_bound == Q::from_integer(4)))
    });
    ok &= check("gallery figure has (p, f, dim) = (9, 2, 11)", || {
        let rd = RootDatum::new(Kind::A, 2)?;
        let g = Gallery::parse(&rd, "id | 2,0,1,0,2,0,1,2,0,1,2,0,1,0,2,0 | 0000000010000100")?;
        let o = Orientation::new(&rd, ChimneySpec::new(vec![1], ExtAffine::identity(2)));
        let st = gallery::fold_stats(&rd, &g, &o);
        Ok((st.p, st.f, st.dim, st.negative_folds) == (9, 2, 11, 0))
    });
    ok
}
