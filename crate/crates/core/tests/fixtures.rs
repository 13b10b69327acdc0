use std::collections::BTreeMap;
use std::path::Path;

use hmmd_kit::morph::{synthesize, ComposeOptions, MorphSystem};
use hmmd_kit::probio::{parse_problem, write_problem, Problem, ProblemType};

fn read(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn course() -> MorphSystem {
    match parse_problem(&read("course_example.morph")).unwrap().problem {
        Problem::Morph(s) => s,
        other => panic!("unexpected {:?}", other.problem_type()),
    }
}

/// Row label, then one value per column; `-` marks an unrated cell.
fn grid(header: &str, rows: &str) -> BTreeMap<(String, String), i64> {
    let cols: Vec<&str> = header.split_whitespace().collect();
    let mut out = BTreeMap::new();
    for line in rows.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let mut cells = line.split_whitespace();
        let row = cells.next().unwrap();
        for (col, v) in cols.iter().zip(cells) {
            if v != "-" {
                out.insert((row.to_string(), col.to_string()), v.parse().unwrap());
            }
        }
    }
    out
}

fn compat_of(system: &MorphSystem, node: &str) -> BTreeMap<(String, String), i64> {
    system.compat[node].iter().map(|e| ((e.left.clone(), e.right.clone()), e.value)).collect()
}

#[test]
fn course_compatibility_matches_reference_tables() {
    let system = course();
    let e = grid(
        "M1 M2 M3 M4 F1 F2 F3 F4 G1 G2 G3 G4",
        "
        L1 1 2 0 0 1 2 0 0 1 1 1 1
        L2 1 2 1 1 1 2 2 1 1 1 2 2
        L3 0 3 3 3 0 3 3 3 1 2 3 3
        L4 0 3 3 3 0 3 3 3 1 2 3 3
        M1 - - - - 1 2 0 0 1 2 0 0
        M2 - - - - 1 2 2 0 1 2 3 3
        M3 - - - - 0 3 3 3 0 3 3 3
        M4 - - - - 0 3 3 3 0 3 3 3
        F1 - - - - - - - - 1 1 0 0
        F2 - - - - - - - - 1 2 3 3
        F3 - - - - - - - - 0 2 3 3
        F4 - - - - - - - - 0 2 3 3
        ",
    );
    let h = grid(
        "O1 O2 O3 O4 B1 B2 B3 B4",
        "
        D1 1 2 0 0 1 1 0 0
        D2 2 3 3 3 2 2 2 2
        D3 0 3 3 3 2 3 3 3
        D4 0 3 3 3 2 3 3 3
        O1 - - - - 1 1 0 0
        O2 - - - - 1 2 2 2
        O3 - - - - 0 2 3 3
        O4 - - - - 0 2 3 3
        ",
    );
    let w = grid(
        "I1 I2 I3 I4 C1 C2 C3 C4",
        "
        P1 1 1 0 0 1 2 0 0
        P2 1 1 2 2 2 3 3 3
        P3 2 3 3 3 0 3 3 3
        P4 2 3 3 3 0 3 3 3
        I1 - - - - 3 3 3 2
        I2 - - - - 3 3 3 3
        I3 - - - - 3 3 3 3
        I4 - - - - 2 3 3 3
        ",
    );
    assert_eq!(compat_of(&system, "E"), e);
    assert_eq!(compat_of(&system, "H"), h);
    assert_eq!(compat_of(&system, "W"), w);
}

#[test]
fn course_root_composites_combine_part_decisions() {
    let synthesis = synthesize(&course(), &ComposeOptions::default()).unwrap();
    let ids: Vec<&str> = synthesis.root().iter().map(|c| c.id.as_str()).collect();
    for e in ["L2*M2*F2*G3", "L3*M3*F2*G3"] {
        for h in ["D3*O3*B3", "D3*O3*B4"] {
            let want = format!("({e})*({h})*(P4*I3*C3)");
            assert!(ids.contains(&want.as_str()), "missing {want} in {ids:?}");
        }
    }
}

#[test]
fn every_fixture_parses_and_rewrites_stably() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut seen = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name.ends_with(".cases") {
            continue;
        }
        let file = parse_problem(&read(&name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        file.problem.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        let written = write_problem(&file);
        assert_eq!(parse_problem(&written).unwrap(), file, "{name}");
        seen.push(file.problem_type());
    }
    seen.sort_by_key(|t| t.token());
    seen.dedup();
    assert_eq!(seen.len(), ProblemType::ALL.len(), "one fixture per problem type");
}
