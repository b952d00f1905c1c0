//! Replays the checked-in fuzz corpus, plus random byte mutations of each
//! seed, through the same checks as the fuzz targets.

use std::path::PathBuf;

use gridcal::atlas::AtlasTable;
use gridcal::exchange::ExchangeClass;
use gridcal::text::{encode, parse};
use gridcal::{CanonicalKey, Certificate, MoveFilter, MoveRecord, SearchCaps};
use proptest::prelude::*;

fn grid_text(s: &str) {
    if let Ok(d) = parse(s) {
        assert_eq!(parse(&encode(&d)).unwrap(), d);
        let k = d.canonical_key();
        assert_eq!(k.decode().unwrap().canonical_key(), k);
    }
}

fn canonical_key(s: &str) {
    if let Ok(d) = CanonicalKey::from_hex(s).and_then(|k| k.decode()) {
        let _ = d.canonical_key();
    }
}

fn certificate(s: &str) {
    if let Ok(c) = s.parse::<Certificate>() {
        assert_eq!(c.to_string().parse::<Certificate>().unwrap(), c);
        if c.from.decode().is_ok() && c.moves.len() <= 64 {
            let _ = c.replay();
        }
    }
}

fn move_record(s: &str) {
    if let Ok(r) = s.parse::<MoveRecord>() {
        assert_eq!(r.to_string().parse::<MoveRecord>().unwrap(), r);
    }
}

fn move_filter(s: &str) {
    if let Ok(f) = s.parse::<MoveFilter>() {
        assert_eq!(f.to_string().parse::<MoveFilter>().unwrap(), f);
    }
}

fn search_caps(s: &str) {
    if let Ok(c) = s.parse::<SearchCaps>() {
        assert_eq!(c.to_string().parse::<SearchCaps>().unwrap(), c);
    }
}

fn class_jsonl(s: &str) {
    if let Ok(c) = ExchangeClass::from_jsonl(s) {
        let _ = c.fingerprint();
        let _ = c.to_jsonl();
    }
}

fn atlas_table(s: &str) {
    if let Ok(t) = AtlasTable::from_json(s) {
        assert_eq!(AtlasTable::from_json(&t.to_json()).unwrap(), t);
    }
}

type Check = fn(&str);

const TARGETS: [(&str, Check); 8] = [
    ("grid_text", grid_text),
    ("canonical_key", canonical_key),
    ("certificate", certificate),
    ("move_record", move_record),
    ("move_filter", move_filter),
    ("search_caps", search_caps),
    ("class_jsonl", class_jsonl),
    ("atlas_table", atlas_table),
];

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    out
}

#[test]
fn every_target_has_seeds_that_pass() {
    for (name, check) in TARGETS {
        let s = seeds(name);
        assert!(!s.is_empty(), "{name}");
        for bytes in s {
            if let Ok(text) = std::str::from_utf8(&bytes) {
                check(text);
            }
        }
    }
}

#[test]
fn valid_seeds_parse() {
    let text = |t: &str, i: usize| String::from_utf8(seeds(t)[i].clone()).unwrap();
    assert!(seeds("grid_text").iter().filter(|b| parse(std::str::from_utf8(b).unwrap()).is_ok()).count() >= 4);
    assert!(seeds("certificate").iter().all(|b| std::str::from_utf8(b).unwrap().parse::<Certificate>().unwrap().replay().is_ok()));
    assert!(ExchangeClass::from_jsonl(&text("class_jsonl", 0)).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn mutated_seeds_never_panic(t in 0usize..8, pick in any::<usize>(), edits in prop::collection::vec((any::<usize>(), any::<u8>()), 1..6)) {
        let (name, check) = TARGETS[t];
        let all = seeds(name);
        let mut bytes = all[pick % all.len()].clone();
        for (pos, b) in edits {
            match pos % 3 {
                0 if !bytes.is_empty() => { let i = pos % bytes.len(); bytes[i] = b; }
                1 => { let i = pos % (bytes.len() + 1); bytes.insert(i, b); }
                _ if !bytes.is_empty() => { let i = pos % bytes.len(); bytes.remove(i); }
                _ => {}
            }
        }
        if let Ok(text) = std::str::from_utf8(&bytes) {
            check(text);
        }
    }
}
