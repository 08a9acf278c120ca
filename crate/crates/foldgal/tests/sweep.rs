use foldgal::adlv;
use foldgal::construct;
use foldgal::{Error, Kind, RootDatum};

fn shrunken_box(rd: &RootDatum, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let n = rd.rank;
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Every lower target either certifies or is refused as unsupported.
fn sweep(kind: Kind, rank: usize, lo: i64, hi: i64) -> (usize, usize) {
    let rd = RootDatum::new(kind, rank).unwrap();
    let (mut ok, mut refused) = (0, 0);
    for lambda in shrunken_box(&rd, lo, hi) {
        for i in 1..=rank {
            if rd.pairing(&rd.simple_root(i), &lambda) % 2 == 0 {
                continue;
            }
            let Ok(targets) = construct::lower_targets(&rd, &lambda, i) else { continue };
            for nu in targets {
                match construct::certify(&rd, &lambda, i, Some(&nu)) {
                    Ok(cert) => {
                        let check = adlv::verify_certificate(&rd, &cert, None).unwrap();
                        assert!(check.holds(), "{} {lambda:?} i={i} nu={nu:?}: {check:?}", rd.name());
                        ok += 1;
                    }
                    Err(Error::Unsupported(_)) => refused += 1,
                    Err(Error::Precondition(_)) => {}
                    Err(e) => panic!("{} {lambda:?} i={i} nu={nu:?}: {e}", rd.name()),
                }
            }
        }
    }
    (ok, refused)
}

#[test]
fn b2_and_c2_certify_every_target() {
    for kind in [Kind::B, Kind::C] {
        let (ok, refused) = sweep(kind, 2, 3, 5);
        assert!(ok > 0);
        assert_eq!(refused, 0, "{kind:?}");
    }
}

#[test]
fn a3_certifies_every_target() {
    let (ok, refused) = sweep(Kind::A, 3, 3, 4);
    assert!(ok > 0);
    assert_eq!(refused, 0);
}

#[test]
fn g2_certifies_or_refuses_honestly() {
    let (ok, _) = sweep(Kind::G, 2, 3, 5);
    assert!(ok > 0);
}
