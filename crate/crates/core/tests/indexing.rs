use poset_algebra::enumerate::posets_up_to_size;
use poset_algebra::indexing::{
    Base, ChainAtlas, IndexError, IndexSpace, Interval, IntervalRelation,
};
use poset_algebra::ordinal::Ordinal;
use poset_algebra::poset::PolarizedPoset;

fn ord(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn nat(k: u64) -> Ordinal {
    Ordinal::from_nat(k)
}

fn poset(elements: &[&str], relations: &[(&str, &str)]) -> PolarizedPoset {
    PolarizedPoset::from_relations(elements, relations, &[]).unwrap()
}

fn diamond() -> PolarizedPoset {
    poset(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
    )
}

fn range_nat(space: &IndexSpace, level: u32) -> u64 {
    space.block_range(level).unwrap().nat().unwrap()
}

#[test]
fn interval_relations_match_concrete_ranges() {
    let space = IndexSpace::new(Base::Finite(2), 1, 3).unwrap();
    let mut all: Vec<(Interval, u64, u64)> = Vec::new();
    for level in 0..=space.top_level() {
        let n_len = 1u64 << level;
        for v in 0..range_nat(&space, level) {
            let iv = Interval::new(level, nat(v));
            space.check_interval(&iv).unwrap();
            assert_eq!(space.eval_block(level, &iv.block).unwrap(), v);
            assert_eq!(
                space.eval_abs(&space.interval_start(&iv)).unwrap(),
                n_len * v
            );
            all.push((iv, n_len * v, n_len * (v + 1)));
        }
    }
    assert_eq!(all.len(), 12 + 6 + 3);
    for (a, s1, e1) in &all {
        for (b, s2, e2) in &all {
            let expect = if s1 == s2 && e1 == e2 {
                IntervalRelation::Equal
            } else if s1 <= s2 && e2 <= e1 {
                IntervalRelation::FirstContainsSecond
            } else if s2 <= s1 && e1 <= e2 {
                IntervalRelation::SecondContainsFirst
            } else {
                assert!(e1 <= s2 || e2 <= s1, "aligned intervals never straddle");
                IntervalRelation::Disjoint
            };
            assert_eq!(space.relate(a, b), expect, "{a:?} vs {b:?}");
            assert_eq!(space.meets(a, b), expect != IntervalRelation::Disjoint);
            match expect {
                IntervalRelation::Equal | IntervalRelation::FirstContainsSecond => {
                    let off = space.offset_within(a, b).unwrap();
                    assert_eq!(off, nat(s2 - s1));
                }
                _ => assert!(space.offset_within(a, b).is_err()),
            }
        }
    }
}

#[test]
fn interval_relations_at_the_infinite_base() {
    let space = IndexSpace::new(Base::Omega, 2, 2).unwrap();
    assert_eq!(space.extent(), ord("w^3*2"));
    assert_eq!(space.block_range(1).unwrap(), ord("w^2*2"));

    let slice1 = Interval::new(3, nat(1));
    let deep = Interval::new(0, ord("w^3 + w*4 + 1"));
    assert_eq!(
        space.relate(&slice1, &deep),
        IntervalRelation::FirstContainsSecond
    );
    assert_eq!(space.offset_within(&slice1, &deep).unwrap(), ord("w*4 + 1"));
    let slice0 = Interval::new(3, nat(0));
    assert_eq!(space.relate(&slice0, &deep), IntervalRelation::Disjoint);
    assert_eq!(
        space.relate(
            &Interval::new(1, ord("w + 3")),
            &Interval::new(1, ord("w + 3"))
        ),
        IntervalRelation::Equal
    );
    assert_eq!(
        space.relate(
            &Interval::new(1, ord("w + 3")),
            &Interval::new(1, ord("w + 4"))
        ),
        IntervalRelation::Disjoint
    );

    assert!(space
        .check_interval(&Interval::new(1, ord("w^2*2")))
        .is_err());
    assert!(space.check_interval(&Interval::new(4, nat(0))).is_err());
    assert!(space.check_interval(&Interval::new(3, nat(1))).is_ok());
}

#[test]
fn refinement_lists_sub_blocks() {
    let space = IndexSpace::new(Base::Finite(3), 1, 2).unwrap();
    let iv = Interval::new(2, nat(1));
    let refined = space.refine(&iv, 0).unwrap();
    assert_eq!(refined.count, nat(9));
    let blocks = refined.blocks().unwrap();
    assert_eq!(blocks.len(), 9);
    for (k, sub) in blocks.iter().enumerate() {
        assert!(space.contains(&iv, sub));
        assert_eq!(space.eval_block(0, &sub.block).unwrap(), 9 + k as u64);
    }
    assert!(refined.nth(&nat(9)).is_err());
    assert!(space.refine(&iv, 2).is_err());

    let wspace = IndexSpace::new(Base::Omega, 1, 2).unwrap();
    let wref = wspace.refine(&Interval::new(2, nat(1)), 0).unwrap();
    assert_eq!(wref.count, ord("w^2"));
    assert!(wref.blocks().is_none());
    let sub = wref.nth(&ord("w*5 + 7")).unwrap();
    assert_eq!(sub.block, ord("w^2 + w*5 + 7"));
    assert!(wspace.contains(&Interval::new(2, nat(1)), &sub));
}

#[test]
fn space_construction_rejects_degenerate_bases() {
    assert!(matches!(
        IndexSpace::new(Base::Finite(1), 1, 1),
        Err(IndexError::BadBase(1))
    ));
    assert!(matches!(
        IndexSpace::new(Base::Finite(0), 1, 1),
        Err(IndexError::BadBase(0))
    ));
    assert!(IndexSpace::new(Base::Finite(2), 0, 1).is_ok());
}

/// Every class of an element is carried bijectively onto every other by the
/// chain transport, so all classes of one element have the same size and
/// together they partition the chains through it.
#[test]
fn classes_of_an_element_are_even_and_exhaustive() {
    for p in posets_up_to_size(5) {
        let atlas = ChainAtlas::new(p, Base::Omega).unwrap();
        for i in 0..atlas.poset().n() {
            let classes = atlas.classes(i);
            let m = classes[0].chis.len();
            let mut seen: Vec<usize> = Vec::new();
            for class in classes {
                assert_eq!(class.chis.len(), m);
                seen.extend_from_slice(&class.chis);
            }
            seen.sort();
            assert_eq!(seen, atlas.chains().through(i));
        }
    }
}

#[test]
fn representative_pairing_is_a_bijection_at_the_infinite_base() {
    let atlas = ChainAtlas::new(diamond(), Base::Omega).unwrap();
    assert_eq!(
        (0..4).map(|i| atlas.e_of(i)).collect::<Vec<_>>(),
        vec![3, 2, 2, 1]
    );
    let sigmas_by_e = |e: u32| -> Vec<Ordinal> {
        let mut out = vec![Ordinal::zero(), nat(1), nat(2), nat(7)];
        if e >= 2 {
            out.push(ord("w*3"));
            out.push(ord("w*11 + 2"));
        }
        if e >= 3 {
            out.push(ord("w^2*2 + w + 5"));
        }
        out
    };
    for i in 0..4 {
        let e = atlas.e_of(i);
        let rep = atlas.rep_class(i);
        let mut images: Vec<Ordinal> = Vec::new();
        for &chi in &rep.chis {
            for sigma in sigmas_by_e(e) {
                let lam = atlas.space().bp(e).multiply(&nat(chi as u64)).add(&sigma);
                assert!(atlas.in_lambda(i, rep, &lam));
                let y = atlas.k_rep(i, &lam).unwrap();
                assert!(y < atlas.index_range(i));
                assert_eq!(atlas.k_rep_inv(i, &y).unwrap(), lam);
                images.push(y);
            }
        }
        images.sort();
        images.dedup();
        assert_eq!(
            images.len(),
            rep.chis.len() * sigmas_by_e(e).len(),
            "pairing is injective"
        );

        // Surjectivity: pull back arbitrary in-range indices.
        for c1 in 0..2u64 {
            for sigma in sigmas_by_e(e) {
                let y = atlas.space().bp(e).multiply(&nat(c1)).add(&sigma);
                let lam = atlas.k_rep_inv(i, &y).unwrap();
                assert!(atlas.in_lambda(i, rep, &lam));
                assert_eq!(atlas.k_rep(i, &lam).unwrap(), y);
            }
        }
    }
}

#[test]
fn finite_base_truncation_is_exact() {
    let atlas = ChainAtlas::new(diamond(), Base::Finite(2)).unwrap();
    let n = 2u64;
    for i in 0..4 {
        let e = atlas.e_of(i);
        let rep = atlas.rep_class(i);
        let m = rep.chis.len() as u64;
        let members = atlas.index_members(i).unwrap();
        let sub = n.pow(e);
        assert_eq!(members.len() as u64, m * sub, "one image per local index");
        let mut uniq = members.clone();
        uniq.dedup();
        assert_eq!(uniq.len(), members.len(), "pairing is injective");

        let range = atlas.space().beth() * sub;
        for v in 0..range {
            let y = nat(v);
            let member = members.contains(&y);
            assert_eq!(atlas.in_index_range(i, &y), member);
            match atlas.k_rep_inv(i, &y) {
                Ok(lam) => {
                    assert!(member);
                    assert_eq!(atlas.k_rep(i, &lam).unwrap(), y);
                }
                Err(IndexError::NotAddressable { .. }) => assert!(!member),
                Err(err) => panic!("unexpected error {err}"),
            }
        }
        assert!(atlas.k_rep_inv(i, &atlas.index_range(i)).is_err());
    }

    // Elements on a single chain see exactly half of the two-chain range.
    let b = 1;
    assert_eq!(atlas.rep_class(b).chis.len(), 1);
    let members = atlas.index_members(b).unwrap();
    assert_eq!(members.len() as u64, n.pow(atlas.e_of(b)));
    assert!((members.len() as u64) < atlas.index_range(b).nat().unwrap());

    // The bottom element lies on every chain, so nothing is truncated.
    let a = 0;
    assert_eq!(atlas.rep_class(a).chis.len() as u64, atlas.space().beth());
    let all = atlas.index_members(a).unwrap();
    assert_eq!(all.len() as u64, atlas.index_range(a).nat().unwrap());
}

#[test]
fn class_charts_agree_with_the_representative() {
    for base in [Base::Omega, Base::Finite(3)] {
        let atlas = ChainAtlas::new(diamond(), base).unwrap();
        for i in 0..4 {
            let e = atlas.e_of(i);
            for class in atlas.classes(i) {
                for &chi in &class.chis {
                    for s in [0u64, 1, 2] {
                        let sigma = match base.finite() {
                            Some(n) => nat(s % n.pow(e)),
                            None => nat(s),
                        };
                        let lam = atlas.space().bp(e).multiply(&nat(chi as u64)).add(&sigma);
                        let y = atlas.k_map(i, class, &lam).unwrap();
                        assert_eq!(atlas.k_inv(i, class, &y).unwrap(), lam);

                        // The chart factors through the chain-part transport.
                        let rep = atlas.rep_class(i);
                        let local = atlas.k_between(i, class, rep, &lam).unwrap();
                        assert_eq!(atlas.k_rep(i, &local).unwrap(), y);
                        assert_eq!(atlas.k_between(i, rep, class, &local).unwrap(), lam);
                    }
                }
            }
        }
    }
}

#[test]
fn charts_reject_foreign_indices() {
    let atlas = ChainAtlas::new(diamond(), Base::Omega).unwrap();

    // Only one chain passes through b; the other chain's indices are foreign.
    let b = 1;
    assert_eq!(atlas.classes(b).len(), 1);
    let rep = atlas.rep_class(b);
    let foreign = atlas.space().bp(atlas.e_of(b)).multiply(&nat(1));
    assert!(matches!(
        atlas.k_map(b, rep, &foreign),
        Err(IndexError::Poset(_)) | Err(IndexError::ChainNotInClass(_))
    ));
    assert!(!atlas.in_lambda(b, rep, &foreign));
    let x = atlas
        .space()
        .bp(atlas.space().top_level())
        .multiply(&nat(1));
    assert!(atlas.t_map(b, rep, &x).is_err());

    // The top element has one class per chain; each rejects the other's.
    let d = 3;
    let classes = atlas.classes(d);
    assert_eq!(classes.len(), 2);
    let foreign_top = atlas
        .space()
        .bp(atlas.e_of(d))
        .multiply(&nat(classes[1].chis[0] as u64));
    assert!(!atlas.in_lambda(d, &classes[0], &foreign_top));
    assert!(atlas.in_lambda(d, &classes[1], &foreign_top));
    assert!(atlas.k_map(d, &classes[0], &foreign_top).is_err());
    assert!(atlas.k_map(d, &classes[1], &foreign_top).is_ok());
}

#[test]
fn absolute_charts_preserve_offsets_and_compose() {
    for base in [Base::Omega, Base::Finite(3)] {
        let atlas = ChainAtlas::new(diamond(), base).unwrap();
        for i in 0..4 {
            let level = atlas.level_of(i);
            let e = atlas.e_of(i);
            let rep = atlas.rep_class(i);
            for class in atlas.classes(i) {
                for &chi in &class.chis {
                    let lam = atlas.space().bp(e).multiply(&nat(chi as u64));
                    for rho_v in [0u64, 1, 2] {
                        let rho = match base.finite() {
                            Some(n) => nat(rho_v % n.pow(level)),
                            None => nat(rho_v),
                        };
                        let x = atlas.space().bp(level).multiply(&lam).add(&rho);
                        let y = atlas.t_map(i, class, &x).unwrap();
                        let (blk, off) = atlas.space().split(&y, level);
                        assert_eq!(off, rho, "block offsets ride along unchanged");
                        assert_eq!(blk, atlas.k_map(i, class, &lam).unwrap());
                        assert_eq!(atlas.t_inv(i, class, &y).unwrap(), x);

                        let via_rep = atlas
                            .t_map(i, rep, &atlas.t_transport(class, rep, &x).unwrap())
                            .unwrap();
                        assert_eq!(via_rep, y, "chart factors through slice transport");
                    }
                }
            }
        }
    }
}

#[test]
fn slice_transport_is_a_groupoid_action_on_coordinates() {
    let atlas = ChainAtlas::new(diamond(), Base::Omega).unwrap();
    let d = 3;
    let classes = atlas.classes(d);
    assert_eq!(classes.len(), 2);
    let x = atlas
        .space()
        .bp(atlas.space().top_level())
        .multiply(&nat(classes[0].chis[0] as u64))
        .add(&ord("w*9 + 4"));
    let there = atlas.t_transport(&classes[0], &classes[1], &x).unwrap();
    let back = atlas.t_transport(&classes[1], &classes[0], &there).unwrap();
    assert_eq!(back, x);
    assert_eq!(atlas.t_transport(&classes[0], &classes[0], &x).unwrap(), x);
    assert!(atlas.t_transport(&classes[1], &classes[0], &x).is_err());
}

#[test]
fn diagonal_interval_families_tile_the_element_slice() {
    for base in [Base::Omega, Base::Finite(2)] {
        for p in posets_up_to_size(4) {
            let atlas = ChainAtlas::new(p, base).unwrap();
            for i in 0..atlas.poset().n() {
                let family = atlas.index_family(i, 8);
                assert!(!family.is_empty());
                for y in &family {
                    let ivs = atlas.y_intervals(i, y).unwrap();
                    assert_eq!(ivs.len(), atlas.classes(i).len());
                    for (a, iv) in ivs.iter().enumerate() {
                        assert_eq!(iv.level, atlas.level_of(i));
                        atlas.space().check_interval(iv).unwrap();
                        let in_slice = atlas
                            .class_intervals(&atlas.classes(i)[a])
                            .iter()
                            .any(|s| atlas.space().contains(s, iv));
                        assert!(in_slice, "family member stays in its class slice");
                    }
                    for (a, iva) in ivs.iter().enumerate() {
                        for ivb in ivs.iter().skip(a + 1) {
                            assert!(!atlas.space().meets(iva, ivb));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn element_slices_meet_exactly_for_comparable_pairs() {
    for p in posets_up_to_size(5) {
        let atlas = ChainAtlas::new(p, Base::Omega).unwrap();
        let poset = atlas.poset();
        for i in 0..poset.n() {
            for j in 0..poset.n() {
                let meets = atlas.x_intervals(i).iter().any(|a| {
                    atlas
                        .x_intervals(j)
                        .iter()
                        .any(|b| atlas.space().meets(a, b))
                });
                assert_eq!(meets, poset.comparable(i, j));
            }
        }
    }
}

#[test]
fn index_families_are_valid_and_capped() {
    for base in [Base::Omega, Base::Finite(2), Base::Finite(3)] {
        for p in posets_up_to_size(4) {
            let atlas = ChainAtlas::new(p, base).unwrap();
            for i in 0..atlas.poset().n() {
                let family = atlas.index_family(i, 12);
                assert!(!family.is_empty() && family.len() <= 12);
                assert!(family.contains(&Ordinal::zero()));
                let mut uniq = family.clone();
                uniq.dedup();
                assert_eq!(uniq.len(), family.len());
                for y in &family {
                    assert!(y < &atlas.index_range(i));
                    assert!(atlas.in_index_range(i, y));
                }
                if let Some(members) = atlas.index_members(i) {
                    if members.len() <= 12 {
                        assert_eq!(family, members);
                    }
                }
            }
        }
    }
}
