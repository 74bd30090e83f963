//! The verification suite: every structural law the library claims about
//! one poset's ring, run as timed checks with witnesses. Resource bounds
//! show up as skipped checks, never as silent passes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::indexing::Base;
use crate::oracle::{
    ideal_lattice_bruteforce, quasi_inverse, unit_regular_spot_check, validate_ring_product,
    FormalAlgebra, OracleError, DENSE_BOUND,
};
use crate::ordinal::Ordinal;
use crate::poset::PolarizedPoset;
use crate::report::{run_checks, CheckItem, CheckReport, Outcome};
use crate::ring::{RingContext, RingElement, RingError};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub base: u64,
    pub prime: u64,
    pub seed: u64,
    pub samples: usize,
    pub max_upper_sets: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            base: 3,
            prime: 5,
            seed: 0,
            samples: 200,
            max_upper_sets: 12,
        }
    }
}

/// Caps for the brute-force cross checks, mirrored by the reports when a
/// bound forces a skip.
const QUASI_INVERSE_DIM_BOUND: usize = 400;
const BRUTEFORCE_DIM_BOUND: usize = 200;
const GEN_FAMILY_CAP: usize = 3;

/// A small random element: a short sum of random generators.
pub fn sample_element(ctx: &RingContext, rng: &mut ChaCha8Rng) -> RingElement {
    sample_in(ctx, rng, ctx.poset().full_mask())
}

/// A short random sum of generators supported inside `mask`.
pub fn sample_in(ctx: &RingContext, rng: &mut ChaCha8Rng, mask: u64) -> RingElement {
    let poset = ctx.poset();
    let members: Vec<usize> = poset.iter_mask(mask).collect();
    let mut acc = RingElement::zero();
    if members.is_empty() {
        return acc;
    }
    let terms = rng.gen_range(1..=4);
    for _ in 0..terms {
        let i = members[rng.gen_range(0..members.len())];
        let d = rng.gen_range(1..ctx.prime());
        let g = if poset.is_maximal(i) {
            ctx.gen_max(i, d).expect("maximal summand")
        } else {
            let family = ctx.atlas().index_family(i, 9);
            let y = &family[rng.gen_range(0..family.len())];
            let z = &family[rng.gen_range(0..family.len())];
            ctx.gen_unit(i, y, z, d).expect("interval unit")
        };
        acc = acc.add(&g);
    }
    acc
}

fn sample_nonzero_in(ctx: &RingContext, rng: &mut ChaCha8Rng, mask: u64) -> RingElement {
    for _ in 0..32 {
        let x = sample_in(ctx, rng, mask);
        if !x.is_zero() {
            return x;
        }
    }
    panic!("could not sample a nonzero element on mask {mask:#b}");
}

/// Run the whole suite against one poset. `instance` labels the reports.
pub fn verify_poset(
    poset: &PolarizedPoset,
    instance: &str,
    cfg: &VerifyConfig,
) -> Result<Vec<CheckReport>, RingError> {
    let ctx = RingContext::new(poset.clone(), Base::Finite(cfg.base), cfg.prime)?;
    let items = suite_items(&ctx, cfg);
    Ok(run_checks(instance, items))
}

/// The full item list for one ring. Split out so the acceptance tests can
/// drive the same checks.
pub fn suite_items<'a>(ctx: &'a RingContext, cfg: &'a VerifyConfig) -> Vec<CheckItem<'a>> {
    let mut items: Vec<CheckItem<'a>> = Vec::new();
    let seed = cfg.seed;

    items.push(CheckItem::new(
        "layers_partition",
        "layers partition the poset and index the canonical length",
        move || check_layers(ctx),
    ));
    items.push(CheckItem::new(
        "restriction_respects_layers",
        "lower subsets inherit the layer filtration by intersection",
        move || check_restriction(ctx),
    ));
    items.push(CheckItem::new(
        "transport_groupoid",
        "chain-class transport is identity on itself, composes, and inverts",
        move || check_transport(ctx),
    ));
    items.push(CheckItem::new(
        "supports_meet_iff_comparable",
        "element slices intersect exactly for comparable pairs",
        move || check_supports_meet(ctx),
    ));
    items.push(CheckItem::new(
        "pairings_round_trip",
        "block pairings and class charts invert exactly",
        move || check_pairings(ctx),
    ));
    items.push(CheckItem::new(
        "dense_products_agree",
        "structured products equal their dense matrices",
        move || check_dense_products(ctx, seed ^ 0x01, cfg.samples),
    ));
    items.push(CheckItem::new(
        "products_associate",
        "sampled triples multiply associatively in normal form",
        move || check_associativity(ctx, seed ^ 0x02),
    ));
    items.push(CheckItem::new(
        "incomparable_parts_annihilate",
        "incomparable parts multiply to zero; comparable products land on the lower element",
        move || check_product_support(ctx),
    ));
    items.push(CheckItem::new(
        "generators_factor_diagonally",
        "interval units absorb their diagonal idempotents",
        move || check_diagonal_factorization(ctx),
    ));
    items.push(CheckItem::new(
        "identity_splits_over_maxima",
        "the identity is the orthogonal sum of the maximal summands",
        move || check_identity_split(ctx, seed ^ 0x03),
    ));
    items.push(CheckItem::new(
        "sheltered_subsets_carry_units",
        "sheltered subsets get identities from their maxima; others are rejected",
        move || check_sheltered_units(ctx),
    ));
    items.push(CheckItem::new(
        "projections_multiply_on_upper_sets",
        "part restriction between nested upper subsets is a ring map; non-upper targets break",
        move || check_projections(ctx, seed ^ 0x04, cfg.max_upper_sets),
    ));
    items.push(CheckItem::new(
        "ideals_are_upper_complements",
        "complements of upper subsets are closed under two-sided products",
        move || check_ideal_closure(ctx, cfg.max_upper_sets),
    ));
    items.push(CheckItem::new(
        "socle_chain_climbs_layers",
        "the socle chain is exactly the layer filtration",
        move || check_socle_chain(ctx),
    ));
    items.push(CheckItem::new(
        "socle_steps_are_essential",
        "every nonzero element of each quotient meets the next socle step",
        move || check_essential_steps(ctx, seed ^ 0x05),
    ));
    items.push(CheckItem::new(
        "annihilators_track_comparability",
        "a part annihilates a simple exactly when its element is not above the simple's",
        move || check_annihilators(ctx),
    ));
    items.push(CheckItem::new(
        "simp_poset_rebuilds_input",
        "annihilator inclusion on simples reconstructs the poset",
        move || {
            if ctx.simp_matches() {
                Outcome::Pass
            } else {
                Outcome::Fail("reconstructed order differs from the input".into())
            }
        },
    ));
    items.push(CheckItem::new(
        "upper_sets_anti_index_ideals",
        "the upper-set lattice anti-indexes the ideal lattice",
        move || check_lattice(ctx, cfg.max_upper_sets),
    ));
    items.push(CheckItem::new(
        "bruteforce_ideals_match",
        "independently enumerated ideals coincide with the upper-set family",
        move || check_bruteforce_ideals(ctx),
    ));
    items.push(CheckItem::new(
        "quasi_inverses_found",
        "sampled coordinate-algebra elements admit quasi-inverses",
        move || check_quasi_inverses(ctx, seed ^ 0x06, cfg.samples, cfg.prime),
    ));
    items.push(CheckItem::new(
        "unit_regularity_exhaustive",
        "every element is unit-regular over the two-element field",
        move || check_unit_regularity(ctx),
    ));
    items.push(CheckItem::new(
        "components_split_identity",
        "connected components give orthogonal central idempotents summing to one",
        move || check_components(ctx, seed ^ 0x07),
    ));
    items.push(CheckItem::new(
        "heights_match_lengths",
        "simple heights equal canonical lengths; the lattice behaves",
        move || check_heights(ctx),
    ));
    items
}

fn check_layers(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let layers = poset.layers();
    if layers.len() as u32 != poset.xi() {
        return Outcome::Fail(format!(
            "{} layers against filtration depth {}",
            layers.len(),
            poset.xi()
        ));
    }
    let mut seen = 0u64;
    for (idx, layer) in layers.iter().enumerate() {
        let alpha = idx as u32 + 1;
        if layer.is_empty() {
            return Outcome::Fail(format!("layer {alpha} is empty"));
        }
        for &i in layer {
            if seen >> i & 1 == 1 {
                return Outcome::Fail(format!("{} appears in two layers", poset.name(i)));
            }
            seen |= 1 << i;
            if poset.lambda_canonical(i) != alpha {
                return Outcome::Fail(format!(
                    "{} has length {} but sits in layer {alpha}",
                    poset.name(i),
                    poset.lambda_canonical(i)
                ));
            }
        }
        if poset.filtration_mask(alpha) != seen {
            return Outcome::Fail(format!("filtration step {alpha} skips elements"));
        }
    }
    if seen != poset.full_mask() {
        return Outcome::Fail("layers miss elements".into());
    }
    Outcome::Pass
}

fn check_restriction(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let n = poset.n();
    if n > 16 {
        return Outcome::Skip(format!("{n} elements give too many subsets"));
    }
    for mask in 0..1u64 << n {
        if !poset.is_lower_set(mask) || mask == 0 {
            continue;
        }
        match poset.layer_restriction_agrees(mask) {
            Ok(true) => {}
            Ok(false) => return Outcome::Fail(format!("subset {mask:#b} relayers differently")),
            Err(e) => return Outcome::Fail(format!("subset {mask:#b}: {e}")),
        }
    }
    Outcome::Pass
}

fn check_transport(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let atlas = ctx.atlas();
    let chains = atlas.chains();
    for i in 0..poset.n() {
        let classes = atlas.classes(i);
        for c1 in classes {
            for &chi in &c1.chis {
                let back = poset
                    .class_transport(chains, c1, c1, chi)
                    .expect("identity transport");
                if back != chi {
                    return Outcome::Fail(format!(
                        "identity transport moved a chain at {}",
                        poset.name(i)
                    ));
                }
                for c2 in classes {
                    let mid = poset
                        .class_transport(chains, c1, c2, chi)
                        .expect("transport");
                    let round = poset
                        .class_transport(chains, c2, c1, mid)
                        .expect("transport");
                    if round != chi {
                        return Outcome::Fail(format!(
                            "transport at {} does not invert",
                            poset.name(i)
                        ));
                    }
                    for c3 in classes {
                        let direct = poset
                            .class_transport(chains, c1, c3, chi)
                            .expect("transport");
                        let composed = poset
                            .class_transport(chains, c2, c3, mid)
                            .expect("transport");
                        if direct != composed {
                            return Outcome::Fail(format!(
                                "transport at {} does not compose",
                                poset.name(i)
                            ));
                        }
                    }
                }
            }
        }
    }
    Outcome::Pass
}

fn check_supports_meet(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let atlas = ctx.atlas();
    let space = atlas.space();
    for i in 0..poset.n() {
        for j in 0..poset.n() {
            let meets = atlas
                .x_intervals(i)
                .iter()
                .any(|a| atlas.x_intervals(j).iter().any(|b| space.meets(a, b)));
            if meets != poset.comparable(i, j) {
                return Outcome::Fail(format!(
                    "slices of {} and {} {} but the elements are {}comparable",
                    poset.name(i),
                    poset.name(j),
                    if meets { "meet" } else { "are disjoint" },
                    if poset.comparable(i, j) { "" } else { "in" },
                ));
            }
        }
    }
    Outcome::Pass
}

fn check_pairings(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let atlas = ctx.atlas();
    let space = atlas.space();
    for i in 0..poset.n() {
        if poset.is_maximal(i) {
            continue;
        }
        let family = atlas.index_family(i, 64);
        for y in &family {
            let lam = match atlas.k_rep_inv(i, y) {
                Ok(lam) => lam,
                Err(e) => return Outcome::Fail(format!("{}: {e}", poset.name(i))),
            };
            match atlas.k_rep(i, &lam) {
                Ok(back) if back == *y => {}
                _ => return Outcome::Fail(format!("pairing at {} does not invert", poset.name(i))),
            }
            for class in atlas.classes(i) {
                if !atlas.in_lambda(i, class, &lam) {
                    continue;
                }
                let z = match atlas.k_map(i, class, &lam) {
                    Ok(z) => z,
                    Err(e) => return Outcome::Fail(format!("{}: {e}", poset.name(i))),
                };
                if atlas.k_inv(i, class, &z).ok() != Some(lam.clone()) {
                    return Outcome::Fail(format!(
                        "class pairing at {} does not invert",
                        poset.name(i)
                    ));
                }
                // Chart round trip at a nonzero in-block offset.
                let x = space
                    .bp(atlas.level_of(i))
                    .multiply(&lam)
                    .add(&Ordinal::from_nat(1));
                match atlas
                    .t_map(i, class, &x)
                    .and_then(|img| atlas.t_inv(i, class, &img))
                {
                    Ok(back) if back == x => {}
                    _ => {
                        return Outcome::Fail(format!(
                            "chart at {} does not round-trip",
                            poset.name(i)
                        ))
                    }
                }
            }
        }
    }
    Outcome::Pass
}

fn check_dense_products(ctx: &RingContext, seed: u64, samples: usize) -> Outcome {
    let space = ctx.atlas().space();
    let extent = space.extent().nat().expect("finite base");
    if extent > DENSE_BOUND {
        return Outcome::Skip(format!("dense extent {extent} exceeds {DENSE_BOUND}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..samples {
        let x = sample_element(ctx, &mut rng);
        let y = sample_element(ctx, &mut rng);
        match validate_ring_product(ctx, &x, &y, DENSE_BOUND) {
            Ok(check) if check.ok => {}
            Ok(check) => {
                return Outcome::Fail(format!("round {round}: mismatch at {:?}", check.mismatch))
            }
            Err(e) => return Outcome::Fail(format!("round {round}: {e}")),
        }
    }
    Outcome::PassWith(format!("{samples} sampled pairs at extent {extent}"))
}

fn check_associativity(ctx: &RingContext, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..300 {
        let x = sample_element(ctx, &mut rng);
        let y = sample_element(ctx, &mut rng);
        let z = sample_element(ctx, &mut rng);
        let left = ctx.mul(&ctx.mul(&x, &y), &z);
        let right = ctx.mul(&x, &ctx.mul(&y, &z));
        if left != right {
            return Outcome::Fail(format!("round {round}: triple fails to associate"));
        }
    }
    Outcome::Pass
}

fn check_product_support(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let gens = ctx.generators(poset.full_mask(), GEN_FAMILY_CAP);
    for (ka, ga) in &gens {
        for (kb, gb) in &gens {
            let prod = ctx.mul(ga, gb);
            let (i, j) = (ka.element, kb.element);
            if !poset.comparable(i, j) {
                if !prod.is_zero() {
                    return Outcome::Fail(format!(
                        "incomparable {} and {} give a nonzero product",
                        poset.name(i),
                        poset.name(j)
                    ));
                }
                continue;
            }
            let low = if poset.leq(i, j) { i } else { j };
            if !prod.is_zero() && prod.support_mask() != 1 << low {
                return Outcome::Fail(format!(
                    "product of {} and {} lands outside {}",
                    poset.name(i),
                    poset.name(j),
                    poset.name(low)
                ));
            }
        }
    }
    Outcome::Pass
}

fn check_diagonal_factorization(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let atlas = ctx.atlas();
    for i in 0..poset.n() {
        if poset.is_maximal(i) {
            let g = ctx.gen_max(i, 1).expect("maximal summand");
            if ctx.mul(&g, &g) != g {
                return Outcome::Fail(format!("{} summand is not idempotent", poset.name(i)));
            }
            continue;
        }
        let family = atlas.index_family(i, GEN_FAMILY_CAP);
        for y in &family {
            let ey = ctx.gen_eyi(i, y).expect("diagonal idempotent");
            for z in &family {
                let ez = ctx.gen_eyi(i, z).expect("diagonal idempotent");
                let u = ctx.gen_unit(i, y, z, 1).expect("interval unit");
                if ctx.mul(&ey, &u) != u || ctx.mul(&u, &ez) != u {
                    return Outcome::Fail(format!(
                        "unit at {} does not absorb its idempotents",
                        poset.name(i)
                    ));
                }
            }
        }
    }
    Outcome::Pass
}

fn check_identity_split(ctx: &RingContext, seed: u64) -> Outcome {
    let poset = ctx.poset();
    let one = ctx.one();
    let mut sum = RingElement::zero();
    let maxima: Vec<usize> = poset.iter_mask(poset.maximal_mask()).collect();
    let parts: Vec<RingElement> = maxima
        .iter()
        .map(|&m| ctx.gen_max(m, 1).expect("maximal summand"))
        .collect();
    for p in &parts {
        sum = sum.add(p);
    }
    if sum != one {
        return Outcome::Fail("maximal summands do not sum to the identity".into());
    }
    for (a, pa) in parts.iter().enumerate() {
        for (b, pb) in parts.iter().enumerate() {
            let prod = ctx.mul(pa, pb);
            if a == b && prod != *pa {
                return Outcome::Fail(format!(
                    "{} summand is not idempotent",
                    poset.name(maxima[a])
                ));
            }
            if a != b && !prod.is_zero() {
                return Outcome::Fail(format!(
                    "{} and {} summands are not orthogonal",
                    poset.name(maxima[a]),
                    poset.name(maxima[b])
                ));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50 {
        let x = sample_element(ctx, &mut rng);
        if ctx.mul(&one, &x) != x || ctx.mul(&x, &one) != x {
            return Outcome::Fail("the identity fails to act neutrally".into());
        }
    }
    Outcome::Pass
}

fn check_sheltered_units(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let n = poset.n();
    if n > 16 {
        return Outcome::Skip(format!("{n} elements give too many subsets"));
    }
    let mut rejected = 0usize;
    for mask in 1..1u64 << n {
        if !poset.is_finitely_sheltered(mask) {
            match ctx.sheltered_unit(mask) {
                Err(RingError::NotSheltered { .. }) => rejected += 1,
                other => {
                    return Outcome::Fail(format!(
                        "unsheltered {mask:#b} was not rejected: {other:?}"
                    ))
                }
            }
            continue;
        }
        let u = match ctx.sheltered_unit(mask) {
            Ok(u) => u,
            Err(e) => return Outcome::Fail(format!("sheltered {mask:#b}: {e}")),
        };
        if ctx.mul(&u, &u) != u {
            return Outcome::Fail(format!("unit of {mask:#b} is not idempotent"));
        }
        for (_, g) in ctx.generators(mask, 2) {
            if ctx.mul(&u, &g) != g || ctx.mul(&g, &u) != g {
                return Outcome::Fail(format!("unit of {mask:#b} fails to act as identity"));
            }
        }
    }
    Outcome::PassWith(format!("{rejected} unsheltered subsets rejected"))
}

fn check_projections(ctx: &RingContext, seed: u64, bound: usize) -> Outcome {
    let poset = ctx.poset();
    let uppers = match poset.upper_sets(bound) {
        Ok(u) => u,
        Err(e) => return Outcome::Skip(e.to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &outer in &uppers {
        for &inner in &uppers {
            if inner & !outer != 0 || outer == 0 {
                continue;
            }
            for _ in 0..10 {
                let x = sample_in(ctx, &mut rng, outer);
                let y = sample_in(ctx, &mut rng, outer);
                let lhs = ctx
                    .quotient_projection(inner, outer, &ctx.mul(&x, &y))
                    .expect("projection of a product");
                let rhs = ctx.mul(
                    &ctx.quotient_projection(inner, outer, &x)
                        .expect("projection"),
                    &ctx.quotient_projection(inner, outer, &y)
                        .expect("projection"),
                );
                if lhs != rhs {
                    return Outcome::Fail(format!(
                        "restriction {inner:#b} of {outer:#b} is not multiplicative"
                    ));
                }
            }
        }
    }
    // A restriction onto a non-upper target must break somewhere.
    let full = poset.full_mask();
    let non_upper = (1..full).find(|&m| !poset.is_upper_set(m));
    match non_upper {
        None => Outcome::PassWith("all subsets are upper".into()),
        Some(target) => {
            let gens = ctx.generators(full, GEN_FAMILY_CAP);
            for (_, ga) in &gens {
                for (_, gb) in &gens {
                    let lhs = ctx.mul(ga, gb).restrict(target);
                    let rhs = ctx.mul(&ga.restrict(target), &gb.restrict(target));
                    if lhs != rhs {
                        return Outcome::PassWith(format!(
                            "non-upper {target:#b} breaks multiplicativity"
                        ));
                    }
                }
            }
            Outcome::Fail(format!("restriction to non-upper {target:#b} never broke"))
        }
    }
}

fn check_ideal_closure(ctx: &RingContext, bound: usize) -> Outcome {
    let poset = ctx.poset();
    let uppers = match poset.upper_sets(bound) {
        Ok(u) => u,
        Err(e) => return Outcome::Skip(e.to_string()),
    };
    for &s in &uppers {
        let handle = ctx.ideal_of_upper(s).expect("validated upper set");
        if !ctx.ideal_closure_check(&handle, GEN_FAMILY_CAP) {
            return Outcome::Fail(format!("handle of {s:#b} is not closed"));
        }
    }
    // A subset that is not a lower set escapes under some product.
    let full = poset.full_mask();
    match (1..full).find(|&m| !poset.is_lower_set(m)) {
        None => Outcome::PassWith("all member subsets are lower".into()),
        Some(members) => {
            let evidence = ctx.closure_evidence(members, GEN_FAMILY_CAP);
            if evidence.closed {
                Outcome::Fail(format!("non-lower members {members:#b} never escaped"))
            } else {
                Outcome::PassWith(format!("non-lower members {members:#b} escape"))
            }
        }
    }
}

fn check_socle_chain(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let chain = ctx.socle_chain();
    if chain.len() as u32 != poset.xi() {
        return Outcome::Fail(format!(
            "socle chain has {} steps against depth {}",
            chain.len(),
            poset.xi()
        ));
    }
    let mut previous = 0u64;
    for (idx, handle) in chain.iter().enumerate() {
        let alpha = idx as u32 + 1;
        let members = ctx.ideal_members_mask(handle);
        if members != poset.filtration_mask(alpha) {
            return Outcome::Fail(format!("step {alpha} differs from the layer filtration"));
        }
        if members & previous != previous || members == previous {
            return Outcome::Fail(format!("step {alpha} does not strictly grow"));
        }
        previous = members;
    }
    if previous != poset.full_mask() {
        return Outcome::Fail("the chain does not exhaust the ring".into());
    }
    Outcome::Pass
}

fn check_essential_steps(ctx: &RingContext, seed: u64) -> Outcome {
    let poset = ctx.poset();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for alpha in 1..=poset.xi() {
        let ambient = poset.full_mask() & !poset.filtration_mask(alpha - 1);
        if ambient == 0 {
            return Outcome::Fail(format!("stage {alpha} has an empty ambient"));
        }
        for round in 0..50 {
            let a = sample_nonzero_in(ctx, &mut rng, ambient);
            match ctx.essential_witness(ambient, &a) {
                Ok(Some(w)) => {
                    if ctx.mul(&a, &w.idempotent).is_zero() {
                        return Outcome::Fail(format!(
                            "stage {alpha} round {round}: witness at {} annihilates",
                            poset.name(w.element)
                        ));
                    }
                }
                Ok(None) => {
                    return Outcome::Fail(format!("stage {alpha} round {round}: no witness found"))
                }
                Err(e) => return Outcome::Fail(format!("stage {alpha} round {round}: {e}")),
            }
        }
    }
    Outcome::Pass
}

fn check_annihilators(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let gens = ctx.generators(poset.full_mask(), 2);
    for i in 0..poset.n() {
        for (key, g) in &gens {
            let kills = ctx.annihilator_check(i, g);
            let expected = !poset.leq(i, key.element);
            if kills != expected {
                return Outcome::Fail(format!(
                    "part at {} against the simple at {}: got {kills}",
                    poset.name(key.element),
                    poset.name(i)
                ));
            }
        }
    }
    Outcome::Pass
}

fn check_lattice(ctx: &RingContext, bound: usize) -> Outcome {
    match ctx.lattice_anti_isomorphism_check(bound) {
        Ok(report) if report.passed() => {
            Outcome::PassWith(format!("{} upper sets", report.upper_sets))
        }
        Ok(report) => Outcome::Fail(format!("{report:?}")),
        Err(RingError::Poset(e)) => Outcome::Skip(e.to_string()),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn check_bruteforce_ideals(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    if poset.n() > 4 {
        return Outcome::Skip(format!(
            "cross-check restricted to 4 elements, given {}",
            poset.n()
        ));
    }
    let ctx2 = match RingContext::new(poset.clone(), Base::Finite(2), 2) {
        Ok(c) => c,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let alg = match FormalAlgebra::new(&ctx2, BRUTEFORCE_DIM_BOUND) {
        Ok(alg) => alg,
        Err(OracleError::DimensionBound { dimension, bound }) => {
            return Outcome::Skip(format!("dimension {dimension} exceeds {bound}"))
        }
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    match ideal_lattice_bruteforce(&alg, BRUTEFORCE_DIM_BOUND) {
        Ok(report) if report.matches => Outcome::PassWith(format!(
            "{} ideals against {} upper sets",
            report.ideal_count, report.upper_count
        )),
        Ok(report) => Outcome::Fail(format!("{:?}", report.witness)),
        Err(OracleError::DimensionBound { dimension, bound }) => {
            Outcome::Skip(format!("dimension {dimension} exceeds {bound}"))
        }
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn check_quasi_inverses(ctx: &RingContext, seed: u64, samples: usize, prime: u64) -> Outcome {
    let poset = ctx.poset();
    let ctx2 = match RingContext::new(poset.clone(), Base::Finite(2), prime) {
        Ok(c) => c,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let alg = match FormalAlgebra::new(&ctx2, QUASI_INVERSE_DIM_BOUND) {
        Ok(alg) => alg,
        Err(OracleError::DimensionBound { dimension, bound }) => {
            return Outcome::Skip(format!("dimension {dimension} exceeds {bound}"))
        }
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..samples {
        let a = alg.random_coords(&mut rng, 6);
        match quasi_inverse(&alg, &a) {
            Some(x) => {
                if alg.mul(&alg.mul(&a, &x), &a) != a {
                    return Outcome::Fail(format!("round {round}: solution fails to verify"));
                }
            }
            None => {
                return Outcome::Fail(format!(
                    "round {round}: no quasi-inverse for a {}-term element",
                    a.len()
                ))
            }
        }
    }
    Outcome::PassWith(format!("{samples} solves at dimension {}", alg.dimension()))
}

fn check_unit_regularity(ctx: &RingContext) -> Outcome {
    let poset = ctx.poset();
    let ctx2 = match RingContext::new(poset.clone(), Base::Finite(2), 2) {
        Ok(c) => c,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let alg = match FormalAlgebra::new(&ctx2, 12) {
        Ok(alg) => alg,
        Err(OracleError::DimensionBound { dimension, bound }) => {
            return Outcome::Skip(format!("dimension {dimension} exceeds {bound}"))
        }
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    match unit_regular_spot_check(&alg) {
        Ok(report) if report.failures.is_empty() => Outcome::PassWith(format!(
            "{} elements, {} units",
            report.elements, report.units
        )),
        Ok(report) => Outcome::Fail(format!("{} elements fail", report.failures.len())),
        Err(OracleError::DimensionBound { dimension, bound }) => {
            Outcome::Skip(format!("dimension {dimension} exceeds {bound}"))
        }
        Err(OracleError::FieldBound(p)) => Outcome::Skip(format!("needs GF(2), got GF({p})")),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn check_components(ctx: &RingContext, seed: u64) -> Outcome {
    let poset = ctx.poset();
    let idems = ctx.component_idempotents();
    let components = poset.connected_components();
    if idems.len() != components.len() {
        return Outcome::Fail(format!(
            "{} idempotents for {} components",
            idems.len(),
            components.len()
        ));
    }
    let mut sum = RingElement::zero();
    for e in &idems {
        sum = sum.add(e);
    }
    if sum != ctx.one() {
        return Outcome::Fail("component idempotents do not sum to one".into());
    }
    for (a, ea) in idems.iter().enumerate() {
        for (b, eb) in idems.iter().enumerate() {
            let prod = ctx.mul(ea, eb);
            if a == b && prod != *ea {
                return Outcome::Fail(format!("component {a} idempotent fails to square"));
            }
            if a != b && !prod.is_zero() {
                return Outcome::Fail(format!("components {a} and {b} are not orthogonal"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..30 {
        let x = sample_element(ctx, &mut rng);
        for (idx, e) in idems.iter().enumerate() {
            if ctx.mul(e, &x) != ctx.mul(&x, e) {
                return Outcome::Fail(format!("component {idx} idempotent is not central"));
            }
        }
    }
    Outcome::PassWith(format!("{} components", idems.len()))
}

fn check_heights(ctx: &RingContext) -> Outcome {
    let report = ctx.well_behaved_report();
    if !report.heights_match {
        let bad = report
            .rows
            .iter()
            .find(|r| r.lambda != r.socle_level)
            .map(|r| {
                format!(
                    "{}: length {} against level {}",
                    r.element, r.lambda, r.socle_level
                )
            })
            .unwrap_or_default();
        return Outcome::Fail(bad);
    }
    if !report.well_behaved {
        return Outcome::Fail("heights match but the report denies it".into());
    }
    if !report.very_well_behaved {
        return Outcome::Fail("the ideal lattice misbehaves".into());
    }
    Outcome::PassWith(format!(
        "{} simples, {} maximal",
        report.rows.len(),
        report.maximal_elements
    ))
}
