//! The committed files under fixtures/ are canonical serializations of the
//! programmatic fixtures.  `committed_fixtures_are_current` fails when they
//! drift; run the ignored `regenerate_fixture_files` test to rewrite them.

use std::path::PathBuf;
use std::sync::Arc;

use purelab::fixtures;
use purelab::io::{self, canonical_json};
use purelab::presheaf::generate;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Every fixture file name with its full canonical contents.
fn manifest() -> Vec<(&'static str, String)> {
    let mut files: Vec<(&'static str, String)> = vec![
        ("span.cat.json", canonical_json(&fixtures::span_cat().to_raw())),
        ("c2.cat.json", canonical_json(&fixtures::c2_cat().to_raw())),
        ("c3.cat.json", canonical_json(&fixtures::c3_cat().to_raw())),
        ("chain3.cat.json", canonical_json(&fixtures::chain3_cat().to_raw())),
        ("vee.cat.json", canonical_json(&fixtures::vee_cat().to_raw())),
        ("nxtrunc.cat.json", canonical_json(&fixtures::nxtrunc_cat().to_raw())),
        ("delta1op.cat.json", canonical_json(&fixtures::delta1op_cat().to_raw())),
    ];

    let rep = Arc::new(fixtures::rep_z());
    files.push(("rep_z.psh.json", canonical_json(&rep.to_raw("span.cat.json"))));

    let x = rep.cat().object_id("X").unwrap();
    let f = rep.elem(x, "f").unwrap();
    let gen_f = generate(&rep, &[f]);
    files.push(("gen_f.psh.json", canonical_json(&gen_f.to_presheaf().to_raw("span.cat.json"))));
    files.push((
        "gen_f_into_rep_z.hom.json",
        canonical_json(&gen_f.inclusion_hom().to_raw("gen_f.psh.json", "rep_z.psh.json")),
    ));

    let c2 = fixtures::c2_cat_arc();
    let orbit = Arc::new(
        purelab::presheaf::Presheaf::build(
            &c2,
            &[("*", &["p", "x", "y"])],
            &[("s", &[("p", "p"), ("x", "y"), ("y", "x")])],
        )
        .unwrap(),
    );
    let star = c2.object_id("*").unwrap();
    let p = orbit.elem(star, "p").unwrap();
    let fixed = generate(&orbit, &[p]);
    files.push(("c2_orbit.psh.json", canonical_json(&orbit.to_raw("c2.cat.json"))));
    files.push(("c2_fixed.psh.json", canonical_json(&fixed.to_presheaf().to_raw("c2.cat.json"))));
    files.push((
        "c2_fixed_into_orbit.hom.json",
        canonical_json(&fixed.inclusion_hom().to_raw("c2_fixed.psh.json", "c2_orbit.psh.json")),
    ));

    let sq = fixtures::three_chains_square();
    files.push(("three_chains.psh.json", canonical_json(&sq.l.to_raw("chain3.cat.json"))));
    files.push(("three_chains_k.psh.json", canonical_json(&sq.k.to_raw("chain3.cat.json"))));
    files.push(("three_chains_a.psh.json", canonical_json(&sq.a.to_raw("chain3.cat.json"))));
    files.push(("three_chains_b.psh.json", canonical_json(&sq.b.to_raw("chain3.cat.json"))));
    files.push((
        "three_chains.sq.json",
        canonical_json(&io::RawSquare {
            k: "three_chains_k.psh.json".into(),
            a: "three_chains_a.psh.json".into(),
            b: "three_chains_b.psh.json".into(),
            l: "three_chains.psh.json".into(),
            ka: sq.ka.to_raw("", "").map,
            kb: sq.kb.to_raw("", "").map,
            al: sq.al.to_raw("", "").map,
            bl: sq.bl.to_raw("", "").map,
        }),
    ));

    files
}

#[test]
fn committed_fixtures_are_current() {
    for (name, expected) in manifest() {
        let path = fixtures_dir().join(name);
        let actual = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
        assert_eq!(
            actual, expected,
            "{name} is stale; run `cargo test -p purelab --test fixture_files -- --ignored`"
        );
    }
}

#[test]
fn committed_fixtures_load_and_round_trip() {
    let dir = fixtures_dir();
    for name in [
        "span.cat.json",
        "c2.cat.json",
        "c3.cat.json",
        "chain3.cat.json",
        "vee.cat.json",
        "nxtrunc.cat.json",
        "delta1op.cat.json",
    ] {
        let path = dir.join(name);
        let (cat, digests) = io::load_category(&path).unwrap();
        assert_eq!(digests.len(), 1, "{name}");
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(canonical_json(&cat.to_raw()), text, "{name} round-trip");
    }

    let (rep, digests) = io::load_presheaf(&dir.join("rep_z.psh.json")).unwrap();
    assert_eq!(digests.len(), 2);
    assert_eq!(rep.size(), 3);

    let (incl, _) = io::load_hom(&dir.join("gen_f_into_rep_z.hom.json")).unwrap();
    assert!(incl.is_mono());
    assert_eq!(incl.source().size(), 1);
    assert_eq!(incl.target().size(), 3);

    let (sq, digests) = io::load_square(&dir.join("three_chains.sq.json")).unwrap();
    assert_eq!(digests.len(), 9);
    assert_eq!((sq.k.size(), sq.a.size(), sq.b.size(), sq.l.size()), (3, 6, 6, 9));
    assert!(purelab::limits::is_pullback_square(&sq).unwrap());
}

#[test]
#[ignore = "rewrites the committed fixture files"]
fn regenerate_fixture_files() {
    let dir = fixtures_dir();
    std::fs::create_dir_all(&dir).unwrap();
    for (name, contents) in manifest() {
        std::fs::write(dir.join(name), contents).unwrap();
    }
}
