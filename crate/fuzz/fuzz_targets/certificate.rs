#![no_main]

use gridcal::Certificate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = s.parse::<Certificate>() {
        assert_eq!(c.to_string().parse::<Certificate>().unwrap(), c);
        if c.from.decode().is_ok() && c.moves.len() <= 64 {
            let _ = c.replay();
        }
    }
});
