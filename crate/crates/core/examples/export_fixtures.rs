//! Rewrites the JSON fixtures from the in-code definitions.

use holokernel::bundles::fixtures as bf;
use holokernel::io::*;
use holokernel::novikov::fixtures as nf;
use holokernel::scalar::int;
use std::fs;

fn write(name: &str, text: String) {
    let path = fixture_path(name);
    fs::write(&path, text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    println!("wrote {}", path.display());
}

fn main() {
    fs::create_dir_all(FIXTURE_DIR).expect("fixture directory");
    for (name, model) in [
        ("circle.json", nf::circle_model()),
        ("circle_relifted.json", nf::circle_model_relifted()),
        ("torus.json", nf::torus_model()),
        ("wall.json", nf::wall_model()),
        ("growth.json", nf::synthetic_growth_model(40)),
    ] {
        write(name, to_json(&FlowModelFile::from_model(&model)));
    }
    for (name, atlas) in [
        ("atlas_three_chart.json", bf::crossing_atlas()),
        ("atlas_two_chamber.json", bf::two_chamber_atlas()),
        ("atlas_dense_wall.json", bf::dense_wall_atlas()),
        ("atlas_pairing.json", bf::pairing_atlas()),
    ] {
        write(name, to_json(&AtlasFile::from_atlas(&atlas)));
    }
    let pairing = bf::pairing_atlas();
    let (g1, g2) = bf::pairing_sections(&pairing);
    let sections = SectionsFile {
        phi: bf::pairing_phi().into_iter().map(Rational).collect(),
        first: SectionJson::from_section(&g1),
        second: SectionJson::from_section(&g2),
    };
    write("sections_pairing.json", to_json(&sections));

    let r = |n: i64| Rational(int(n));
    let slag = SlagFile {
        classes: vec![vec![r(1), r(0)], vec![r(0), r(1)]],
        positivity: Some(vec![r(1), r(1)]),
        weights: (1..=2)
            .flat_map(|k| {
                (0..2).map(move |class| WeightJson {
                    k,
                    class,
                    weight: Rational(int(1)),
                })
            })
            .collect(),
        kappa: Some(vec![r(2), r(1)]),
    };
    write("slag_two_class.json", to_json(&slag));

    write(
        "family_crossing.json",
        to_json(&FamilyFile {
            params: vec![-1.0, 1.0],
            matrices: vec![vec![vec![-1.0]], vec![vec![1.0]]],
            imaginary: None,
            generic: true,
        }),
    );
    // H(t) = diag(t, 1) + t·(off-diagonal i): one eigenvalue crosses.
    write(
        "family_hermitian.json",
        to_json(&FamilyFile {
            params: vec![-1.0, 0.0, 1.0],
            matrices: vec![
                vec![vec![-1.0, 0.0], vec![0.0, 2.0]],
                vec![vec![-0.25, 0.0], vec![0.0, 2.0]],
                vec![vec![1.0, 0.0], vec![0.0, 2.0]],
            ],
            imaginary: Some(vec![
                vec![vec![0.0, 0.5], vec![-0.5, 0.0]],
                vec![vec![0.0, 0.0], vec![0.0, 0.0]],
                vec![vec![0.0, -0.5], vec![0.5, 0.0]],
            ]),
            generic: true,
        }),
    );
}
