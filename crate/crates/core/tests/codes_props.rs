use std::collections::HashSet;

use distill_core::codes::{enumerate_group, Catalogue, StabilizerCode};
use distill_core::pauli::PauliString;

fn builtin(name: &str) -> StabilizerCode {
    Catalogue::builtin().code(name).unwrap()
}

fn key(p: &PauliString) -> String {
    p.to_string()
}

#[test]
fn groups_are_closed_as_sets() {
    for name in ["five_qubit", "steane"] {
        let code = builtin(name);
        let group = enumerate_group(&code).unwrap();
        let set: HashSet<String> = group.iter().map(key).collect();
        let products: HashSet<String> = group.iter().flat_map(|a| group.iter().map(move |b| key(&a.mul(b).unwrap()))).collect();
        assert_eq!(set, products, "{name}");
    }
}

#[test]
fn groups_have_exact_size_and_hermitian_elements() {
    for entry in &Catalogue::builtin().entries {
        let code = entry.stabilizer_code().unwrap();
        if code.n > 14 {
            continue;
        }
        let group = enumerate_group(&code).unwrap();
        assert_eq!(group.len(), 1 << (code.n - code.k), "{}", code.name);
        let distinct: HashSet<String> = group.iter().map(key).collect();
        assert_eq!(distinct.len(), group.len(), "{}", code.name);
        assert!(group.iter().all(PauliString::is_hermitian), "{}", code.name);
        for word in 1..1usize << (2 * code.k) {
            let l = code.logical_word(word).unwrap();
            for g in &group {
                assert!(g.mul(&l).unwrap().is_hermitian(), "{} word {word}", code.name);
            }
        }
    }
}

#[test]
fn distance_three_codes() {
    for name in ["five_qubit", "steane"] {
        let code = builtin(name);
        assert_eq!(code.distance().unwrap(), 3, "{name}");
        let group = enumerate_group(&code).unwrap();
        let min = (1..4)
            .flat_map(|w| {
                let l = code.logical_word(w).unwrap();
                group.iter().map(move |g| g.mul(&l).unwrap().weight()).collect::<Vec<_>>()
            })
            .min()
            .unwrap();
        assert_eq!(min, 3, "{name}");
    }
}

#[test]
fn triorthogonal_entries_pass_their_checks() {
    let cat = Catalogue::builtin();
    for e in &cat.entries {
        assert!(e.validate().is_empty(), "{}: {:?}", e.name, e.validate());
        if let Some(m) = &e.matrix {
            let rows = m.rows();
            let pop = |x: u64| x.count_ones() % 2;
            for a in 0..rows.len() {
                for b in a + 1..rows.len() {
                    assert_eq!(pop(rows[a] & rows[b]), 0);
                    for c in b + 1..rows.len() {
                        assert_eq!(pop(rows[a] & rows[b] & rows[c]), 0);
                    }
                }
            }
        }
    }
}
