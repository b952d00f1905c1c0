#![no_main]

use gridcal::atlas::AtlasTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = AtlasTable::from_json(s) {
        assert_eq!(AtlasTable::from_json(&t.to_json()).unwrap(), t);
        let _ = t.load(|e| {
            let hex = e.strip_prefix("key:").ok_or("no files here")?;
            gridcal::CanonicalKey::from_hex(hex).and_then(|k| k.decode()).map_err(|e| e.to_string())
        });
    }
});
