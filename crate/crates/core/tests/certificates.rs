mod common;

use common::trefoil;
use gridcal::cert::{CertificateParseError, ReplayError};
use gridcal::moves::{MoveFilter, StabType};
use gridcal::search::reachable_set;
use gridcal::{Certificate, ContactSign, SearchCaps};
use proptest::prelude::*;

fn long_certificate() -> Certificate {
    let r = reachable_set(&trefoil(), &MoveFilter::of_type(StabType::II), &SearchCaps::new(6, 3_000, 60.0));
    r.keys()
        .filter_map(|k| r.certificate_to(k))
        .max_by_key(|c| c.moves.len())
        .unwrap()
}

#[test]
fn text_round_trip() {
    let c = long_certificate();
    assert!(c.moves.len() >= 2);
    let back: Certificate = c.to_string().parse().unwrap();
    assert_eq!(back, c);
    assert_eq!(back.replay().unwrap().last(), Some(&c.to));
}

#[test]
fn wrong_target_is_rejected() {
    let mut c = long_certificate();
    c.to = c.from.clone();
    assert!(matches!(c.replay(), Err(ReplayError::WrongEnd { .. })));
}

#[test]
fn narrowed_filter_is_rejected() {
    let mut c = long_certificate();
    c.filter = MoveFilter::legendrian(ContactSign::Plus);
    assert!(matches!(c.replay(), Err(ReplayError::Filtered { .. })));
}

#[test]
fn tight_caps_are_rejected() {
    let mut c = long_certificate();
    c.caps.max_grid_size = c.from.grid_size();
    assert!(matches!(c.replay(), Err(ReplayError::TooLarge { .. })));
}

#[test]
fn reordered_moves_are_rejected() {
    let mut c = long_certificate();
    c.moves.reverse();
    assert!(c.replay().is_err());
}

#[test]
fn malformed_text_is_rejected() {
    let good = long_certificate().to_string();
    let cases = [
        good.replacen("gridcal-certificate v1", "gridcal-certificate v9", 1),
        good.replacen("from ", "frm ", 1),
        good.replacen("moves ", "moves x", 1),
        good.lines().take(good.lines().count() - 1).collect::<Vec<_>>().join("\n"),
        format!("{good}{}\n", good.lines().last().unwrap()),
        String::new(),
    ];
    for text in cases {
        let e = text.parse::<Certificate>().unwrap_err();
        assert!(matches!(e, CertificateParseError::Syntax { .. }));
    }
}

proptest! {
    #[test]
    fn parser_never_panics(s in "\\PC{0,200}") {
        let _ = s.parse::<Certificate>();
    }

    #[test]
    fn corrupted_lines_never_replay_silently(line in 6usize..12, junk in "[0-9a-z ]{1,20}") {
        let c = long_certificate();
        let text = c.to_string();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        if line < lines.len() && lines[line] != junk {
            lines[line] = junk;
            if let Ok(bad) = lines.join("\n").parse::<Certificate>() {
                if bad != c {
                    let ok = bad.replay().map(|t| t.last() == Some(&c.to)).unwrap_or(false);
                    prop_assert!(!ok);
                }
            }
        }
    }
}
