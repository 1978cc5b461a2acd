//! The derivation walk: start from the vanishing chamber below `ℓ_f`,
//! cross every candidate wall upward, and express the large-volume
//! invariant of the shifted class in lower-degree and rank −1 symbols.
//! At minimal degree the whole walk collapses to the single closed-form
//! relation with coefficient `χ̄(v(n₀))`.
//!
//! Run with `cargo run -p tiltwall --example derive_relations`.

use tiltwall::rat::{rat, rint, Rat};
use tiltwall::threefold::{KClass, ThreefoldModel};
use tiltwall::walls::Limits;
use tiltwall::wcf::{js_base_relation, pt_bridge, walk_walls};

fn main() {
    let x = ThreefoldModel::quintic();
    let limits = Limits::default();

    // Degree-1 parent: the base case of the induction.
    let v = KClass::new(0, rint(1), rat(-1, 2), rat(1, 6));
    let n0 = rint(10);
    let derivation = walk_walls(&v, &n0, &x, &limits).unwrap();

    println!("walk for v = {v}, n₀ = {n0}:");
    for step in &derivation.steps {
        println!("  [{}] {}", step.provenance.citation_tag, step);
    }
    println!("\nfinal: {}", derivation.final_relation);

    // The closed form agrees with the walk exactly.
    let closed = js_base_relation(&v, &n0, &x).unwrap();
    assert_eq!(derivation.final_relation.right, closed.right);
    println!(
        "matches the closed form with coefficient χ̄(v(10))·#tors = {}",
        closed.provenance.coefficients[0]
    );

    // The surviving symbol J(v) is itself rank 0; at large volume the
    // rank −1 side of the story is a stable pair.  The bridge rewrites
    // J of a rank −1 class as #tors · PT(β·H, χ).
    let (_, dual_shift) = x.stable_pair_class(&rint(1), &rint(3), &rint(4));
    let bridge = pt_bridge(&dual_shift, &x).unwrap();
    println!("\nbridge: {bridge}");

    // A degree-2 walk crosses many walls; every crossing carries either
    // the exact two-factor coefficient χ̄ or a symbolic multi-factor
    // placeholder, and substitution composes them into one relation.
    let v2 = KClass::new(0, rint(2), rint(-1), rat(1, 3));
    let n0 = rint(3);
    let derivation = walk_walls(&v2, &n0, &x, &limits).unwrap();
    println!(
        "\nwalk for v = {v2}, n₀ = {n0}: {} wall relations",
        derivation.steps.len()
    );
    let final_rel = &derivation.final_relation;
    println!(
        "final relation has {} terms; the J(v₂)-coefficient is χ̄(v₂(3)) = {}",
        final_rel.right.len(),
        coefficient_of_plain_j(final_rel, &v2)
    );
}

/// The coefficient of the single-symbol term `J_{b,∞}(target)`.
fn coefficient_of_plain_j(
    relation: &tiltwall::wcf::Relation,
    target: &KClass,
) -> Rat {
    use tiltwall::wcf::{ChamberTag, InvariantSymbol};
    relation
        .right
        .iter()
        .find_map(|term| match term.symbols.as_slice() {
            [InvariantSymbol::JAt { class, chamber, .. }]
                if class == target && *chamber == ChamberTag::LargeVolume =>
            {
                Some(term.coefficient.clone())
            }
            _ => None,
        })
        .expect("the walk always emits the solved J(v) term")
}
