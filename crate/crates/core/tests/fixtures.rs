//! The shipped `.cyc` files must match the library fixtures, parse, and
//! balance (except `*_unbalanced`). `TROPDEG_BLESS=1` rewrites them.

use std::path::PathBuf;

use tropdeg::cli::format::{parse_cycle, write_cycle};
use tropdeg::cycles::{check_balancing, validate_complex, BlockStructure, TropicalCycle, WeightedFacet};
use tropdeg::fixtures;
use tropdeg::kernel::num::int_vec;
use tropdeg::kernel::polyhedron::Polyhedron;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn unbalanced_line() -> TropicalCycle {
    let facets = [[1, 0], [0, 1], [-1, -1]]
        .iter()
        .zip([1, 1, 2])
        .map(|(r, weight)| WeightedFacet { poly: Polyhedron::cone(2, &[int_vec(r)]), weight })
        .collect();
    TropicalCycle::new(BlockStructure::single(2), facets).unwrap()
}

fn corpus() -> Vec<(&'static str, TropicalCycle)> {
    vec![
        ("standard_line", fixtures::standard_line()),
        ("standard_plane", fixtures::standard_plane()),
        ("worked_a", fixtures::worked_a()),
        ("worked_b", fixtures::worked_b()),
        ("parallel_lines", fixtures::parallel_lines()),
        ("diagonal_11", fixtures::diagonal_11()),
        ("coordinate_hyperplanes_3", fixtures::coordinate_hyperplanes(3)),
        ("scaled_line_d2", fixtures::scaled_line(2)),
        ("standard_hyperplane_3", fixtures::standard_hyperplane(3)),
        ("standard_line_unbalanced", unbalanced_line()),
    ]
}

#[test]
fn shipped_fixtures_match_library() {
    let bless = std::env::var_os("TROPDEG_BLESS").is_some();
    for (name, cycle) in corpus() {
        let path = dir().join(format!("{name}.cyc"));
        if bless {
            std::fs::create_dir_all(dir()).unwrap();
            std::fs::write(&path, write_cycle(&cycle)).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_cycle(&text).unwrap(), cycle, "{name}");
    }
}

#[test]
fn every_fixture_validates_and_balances() {
    for entry in std::fs::read_dir(dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "cyc") {
            continue;
        }
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let cycle = parse_cycle(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(validate_complex(&cycle).pure, "{name}");
        let balanced = check_balancing(&cycle).unwrap().balanced;
        assert_eq!(balanced, !name.ends_with("_unbalanced"), "{name}");
    }
}
