use super::*;
use crate::exactnum::{int, rat};
use crate::geom::Polytope3 as P3;

fn cube(lo: Rat, hi: Rat) -> Polytope3 {
    P3::axis_box([lo.clone(), lo.clone(), lo], [hi.clone(), hi.clone(), hi])
}

fn upper_half() -> Interval {
    Interval::new(rat(1, 2), int(1)).unwrap()
}

fn x_domains() -> Vec<MaxDomain> {
    crate::bundle::maximal_domains(Space::X, &upper_half(), 1).unwrap()
}

fn x_certificate(doms: &[MaxDomain]) -> Certificate {
    let bodies: Vec<(String, Polytope3)> = doms
        .iter()
        .enumerate()
        .map(|(k, d)| (format!("D_{k}"), d.body.clone()))
        .collect();
    certificate_from_bodies(Space::X, upper_half(), &bodies)
}

#[test]
fn disjointness_catches_a_duplicate() {
    let a = cube(int(0), int(1));
    let b = cube(int(1), int(2));
    assert!(check_disjoint("ok", &[("a".into(), a.clone()), ("b".into(), b)]).pass);
    let c = check_disjoint("dup", &[("a".into(), a.clone()), ("a'".into(), a)]);
    assert!(!c.pass);
    assert_eq!(c.witnesses, vec!["a meets a'".to_string()]);
}

#[test]
fn volume_check_catches_a_perturbed_body() {
    let a = vec![cube(int(0), int(1)), cube(int(1), int(2))];
    let mut b = a.clone();
    assert!(check_volume("same", &a, &b).pass);
    b[1] = cube(int(1), rat(201, 100));
    assert!(!check_volume("perturbed", &a, &b).pass);
}

#[test]
fn inclusion_in_a_union() {
    let outer = vec![
        cube(int(0), int(1)),
        P3::axis_box([int(1), int(0), int(0)], [int(2), int(1), int(1)]),
    ];
    let inner = P3::axis_box([rat(1, 2), int(0), int(0)], [rat(3, 2), int(1), int(1)]);
    assert!(contained_in_union(std::slice::from_ref(&inner), &outer));
    let sticking_out = P3::axis_box([rat(1, 2), int(0), int(0)], [rat(5, 2), int(1), int(1)]);
    assert!(!contained_in_union(&[sticking_out], &outer));
}

#[test]
fn report_needs_at_least_one_check() {
    let mut r = CheckReport::new("empty");
    assert!(!r.passed());
    r.push(Check::new("fine", vec![]));
    assert!(r.passed());
    r.push(Check::fail("broken", "because"));
    assert!(!r.passed());
    assert!(r.to_string().contains("broken"));
}

#[test]
fn bundle_slices_match_planar_maps() {
    for s in [rat(3, 5), rat(5, 7), rat(11, 12)] {
        assert!(check_slice(&upper_half(), &s).unwrap().pass);
    }
}

#[test]
fn half_swap_theorem_and_its_domain() {
    assert!(verify_theorem22_at(&rat(7, 10)).unwrap().passed());
    assert!(verify_theorem22_at(&rat(1, 3))
        .map(|r| !r.passed())
        .unwrap_or(true));
}

#[test]
fn similarity_theorem_negative_control() {
    assert!(verify_theorem21_at(&rat(29, 70), 1 << 16).unwrap().passed());
    assert!(!verify_theorem21_at(&rat(1, 3), 1 << 16).unwrap().passed());
}

#[test]
fn certificate_round_trip() {
    let doms = x_domains();
    let c = x_certificate(&doms);
    let text = c.to_string();
    let back = parse_certificate(&text).unwrap();
    assert_eq!(back, c);
    assert!(back.flags().is_empty());
}

#[test]
fn certificate_errors_carry_positions() {
    assert_eq!(parse_certificate(""), Err(CertError::Empty));
    assert_eq!(
        parse_certificate("# only a comment\n"),
        Err(CertError::Empty)
    );
    assert_eq!(
        parse_certificate("space=Y interval=2/5:5/12\n"),
        Err(CertError::Empty)
    );
    let e = parse_certificate("space=Y interval=2/5:5/12\n\nid=P iota=2\n").unwrap_err();
    assert!(
        matches!(
            e,
            CertError::Parse {
                line: 3,
                col: 11,
                ..
            }
        ),
        "{e}"
    );
    let e = parse_certificate("space=Y interval=2/5:5/12\n\nid=P iota=0\nx=1/0 v=0 s=2/5\n")
        .unwrap_err();
    assert!(
        matches!(
            e,
            CertError::Parse {
                line: 4,
                col: 3,
                ..
            }
        ),
        "{e}"
    );
    let e = parse_certificate("space=W interval=2/5:5/12\n").unwrap_err();
    assert!(matches!(e, CertError::Parse { line: 1, .. }));
    let e = parse_certificate("space=Y interval=2/5:5/12\nx=0 v=0 s=2/5\n").unwrap_err();
    assert!(matches!(e, CertError::Parse { line: 2, .. }));
}

#[test]
fn certificate_typos_are_flagged_not_rewritten() {
    let text = "\
space=Y interval=2/5:5/12

id=P_1 iota=0 pair=P_2
x=\\0 v=0 s=2/5
x=-197 v=0 s=2/5
x=0 v=1/7 s=2/5
x=0 v=0 s=5/12
";
    let c = parse_certificate(text).unwrap();
    let flags: Vec<CertFlag> = c.blocks[0].flags.clone();
    assert!(flags.contains(&CertFlag::PairLabel {
        line: 3,
        claimed: "P_2".into()
    }));
    assert!(flags.contains(&CertFlag::LeadingBackslash {
        line: 4,
        field: 'x'
    }));
    assert!(flags.contains(&CertFlag::OutsideChart { line: 5 }));
    assert!(flags.contains(&CertFlag::DenominatorMismatch {
        line: 6,
        field: 'v'
    }));
    assert!(c.blocks[0].fatal());
    assert_eq!(c.blocks[0].verts[1].value.x, int(-197));
    assert_eq!(c.blocks[0].verts[0].raw[0], "\\0");
    // the raw text survives a round trip
    assert_eq!(c.to_string().lines().nth(3), Some("x=\\0 v=0 s=2/5"));
}

#[test]
fn iota_blocks_expand_to_two_entries() {
    let text = "space=X interval=1/2:1\n\nid=A iota=1\nx=0 v=0 s=1/2\nx=1/2 v=0 s=1/2\nx=0 v=1/4 s=1/2\nx=0 v=0 s=1\n";
    let c = parse_certificate(text).unwrap();
    let e = c.entry_vertices();
    assert_eq!(e.len(), 2);
    assert_eq!(e[1].0, "iota(A)");
    assert_eq!(e[1].1[1], Point3::new(rat(-1, 2), int(0), rat(1, 2)));
}

#[test]
fn exact_certificate_matches() {
    let doms = x_domains();
    let refs: Vec<&MaxDomain> = doms.iter().collect();
    let c = x_certificate(&doms);
    let ms = certificate_matches(&c, &refs, &upper_half());
    assert!(ms
        .iter()
        .enumerate()
        .all(|(k, m)| m.2 == EntryMatch::Exact(k)));
    assert!(match_certificate(&c, &refs, &upper_half()).passed());
}

#[test]
fn one_coordinate_typo_is_repaired() {
    let doms = x_domains();
    let refs: Vec<&MaxDomain> = doms.iter().collect();
    let mut c = x_certificate(&doms);
    let right = c.blocks[3].verts[0].value.x.clone();
    let wrong = &right + rat(1, 1000);
    c.blocks[3].verts[0].value.x = wrong.clone();
    let ms = certificate_matches(&c, &refs, &upper_half());
    assert_eq!(
        ms[3].2,
        EntryMatch::OneCoordinate {
            dom: 3,
            vertex: 0,
            field: 'x',
            listed: wrong,
            computed: right
        }
    );
    let r = match_certificate(&c, &refs, &upper_half());
    assert!(r.passed());
    assert!(r.notes.iter().any(|n| n.contains("should read")));
}

#[test]
fn missing_entry_is_reported() {
    let doms = x_domains();
    let refs: Vec<&MaxDomain> = doms.iter().collect();
    let mut c = x_certificate(&doms);
    c.blocks.remove(5);
    let r = match_certificate(&c, &refs, &upper_half());
    assert!(!r.passed());
    assert!(!r.get("every computed body is accounted for").unwrap().pass);
}

#[test]
fn certificate_for_the_wrong_list_fails() {
    let doms = x_domains();
    let c = x_certificate(&doms);
    let lower = Interval::new(int(0), rat(1, 2)).unwrap();
    let other = crate::bundle::maximal_domains(Space::X, &lower, 1).unwrap();
    let refs: Vec<&MaxDomain> = other.iter().collect();
    assert!(!match_certificate(&c, &refs, &lower).passed());
}

#[test]
fn bundled_certificates_parse() {
    for case in [LemmaCase::A23, LemmaCase::A24] {
        let (y, z) = bundled_certificates(case);
        assert_eq!((y.space, z.space), (Space::Y, Space::Z));
        assert!(!y.blocks.is_empty() && !z.blocks.is_empty());
    }
}
