#![no_main]

use gridcal::MoveFilter;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = s.parse::<MoveFilter>() {
        assert_eq!(f.to_string().parse::<MoveFilter>().unwrap(), f);
    }
});
