use latcom_core::analytic::divisor_profile;
use latcom_core::degrees::Degrees;
use latcom_core::group::{cyclic, direct_product, make_group, parse_cayley_text, semidirect_cyclic, to_cayley_text};
use latcom_core::lattice::all_subgroups;
use latcom_core::{ExactRational, FamilySpec};

#[test]
fn trivial_action_is_the_direct_product() {
    for (m, t) in [(3, 4), (5, 2), (6, 6), (7, 3)] {
        let sd = semidirect_cyclic(m, t, 1).unwrap();
        let dp = direct_product(&cyclic(m).unwrap(), &cyclic(t).unwrap()).unwrap();
        assert_eq!(sd.rows(), dp.rows());
    }
}

#[test]
fn choice_of_action_does_not_matter() {
    // 2 and 4 both have order 3 modulo 7
    let values = |k: i64| {
        let g = semidirect_cyclic(7, 3, k).unwrap();
        let l = all_subgroups(&g).unwrap();
        let d = Degrees::new(&g, &l);
        let h = l.index_of(&g.closure(&[1])).unwrap();
        (d.sd(), d.sd_rel(h), d.f_image(), l.len(), l.gamma())
    };
    let a = values(2);
    assert_eq!(a, values(4));
    assert_eq!(a.1, ExactRational::new(7, 10));
}

#[test]
fn dihedral_lattice_by_order() {
    for n in 1..=30u64 {
        let g = FamilySpec::Dihedral(n).build().unwrap();
        let l = all_subgroups(&g).unwrap();
        let prof = divisor_profile(n);
        assert_eq!(l.len() as u128, prof.tau as u128 + prof.sigma, "n = {n}");
        for d in 1..=2 * n {
            let mut want = 0;
            if n % d == 0 {
                want += 1;
            }
            if d % 2 == 0 && n % (d / 2) == 0 {
                want += n / (d / 2);
            }
            let got = l.subgroups().iter().filter(|s| s.size() as u64 == d).count() as u64;
            assert_eq!(got, want, "n = {n}, order {d}");
        }
    }
}

#[test]
fn cayley_text_roundtrip_preserves_degrees() {
    for spec in ["D(8)", "Q(8)", "A4", "T21(7,3,1)"] {
        let g = spec.parse::<FamilySpec>().unwrap().build().unwrap();
        let h = make_group(&parse_cayley_text(&to_cayley_text(&g)).unwrap()).unwrap();
        assert_eq!(g.rows(), h.rows());
        let (lg, lh) = (all_subgroups(&g).unwrap(), all_subgroups(&h).unwrap());
        assert_eq!(Degrees::new(&g, &lg).report().sd, Degrees::new(&h, &lh).report().sd);
    }
}

#[test]
fn class_c_examples() {
    for (spec, member) in [
        ("D(6)", true),
        ("prod(D(6),Z(5))", true),
        ("prod(D(6),Z(7))", true),
        ("prod(D(6),Z(25))", true),
        ("prod(D(6),Z(3))", false),
        ("D(10)", false),
        ("A4", false),
        ("Q(8)", false),
    ] {
        let g = spec.parse::<FamilySpec>().unwrap().build().unwrap();
        let l = all_subgroups(&g).unwrap();
        assert_eq!(Degrees::new(&g, &l).report().in_class_c, member, "{spec}");
    }
}
