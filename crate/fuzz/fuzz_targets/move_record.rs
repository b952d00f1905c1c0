#![no_main]

use gridcal::MoveRecord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = s.parse::<MoveRecord>() {
        assert_eq!(r.to_string().parse::<MoveRecord>().unwrap(), r);
        let _ = r.category();
    }
});
