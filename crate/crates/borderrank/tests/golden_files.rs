//! Byte-exact reproduction of the frozen exchange-format files.

use borderrank::constructions::{verify_construction, witness_family, Construction};
use borderrank::exponent::{
    format_significant, generate_grid, schonhage_omega, to_ppm, GridFamily, GridSpec, RangeSpec,
};
use borderrank::limits::{parse_witness, write_witness};
use borderrank::tensor::mamu;

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("missing golden {path}: {e}"))
}

#[test]
fn witness_file_is_frozen_and_roundtrips() {
    let frozen = golden("witness_c2_a2.wit");
    let (ambient, family) = witness_family(&Construction::C2 { a: 2 }).unwrap();
    let rendered = write_witness(&ambient, ambient.len(), &family);
    assert_eq!(rendered, frozen);

    let (parsed_ambient, mode, parsed) = parse_witness(&frozen).unwrap();
    assert_eq!(parsed_ambient, ambient);
    assert_eq!(mode, 3);
    assert_eq!(parsed, family);
    assert_eq!(write_witness(&parsed_ambient, mode, &parsed), frozen);
}

#[test]
fn report_block_is_frozen() {
    let report = verify_construction(&Construction::C2 { a: 2 }).unwrap();
    assert_eq!(report.render(), golden("report_c2_a2.txt"));
}

#[test]
fn tensor_dump_is_frozen() {
    assert_eq!(mamu(2, 2, 2).dump(), golden("dump_mamu_222.txt"));
}

#[test]
fn omega_values_are_frozen() {
    let (p_star, omega_star) = schonhage_omega(3, 3).unwrap();
    let rendered = format!(
        "p_star = {}\nomega_star = {}\n",
        format_significant(p_star),
        format_significant(omega_star)
    );
    assert_eq!(rendered, golden("omega_3_3.txt"));
}

#[test]
fn heatmap_is_frozen() {
    let spec = GridSpec::new(
        GridFamily::Dome,
        vec![
            RangeSpec::new(2.0, 6.0, 2.0).unwrap(),
            RangeSpec::new(0.2, 0.8, 0.2).unwrap(),
        ],
    )
    .unwrap();
    let points = generate_grid(&spec).unwrap();
    assert_eq!(to_ppm(&spec, &points).unwrap(), golden("heatmap_dome_small.ppm"));
}
