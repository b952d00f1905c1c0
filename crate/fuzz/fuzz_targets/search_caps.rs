#![no_main]

use gridcal::SearchCaps;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = s.parse::<SearchCaps>() {
        assert_eq!(c.to_string().parse::<SearchCaps>().unwrap(), c);
    }
});
