#![no_main]

use libfuzzer_sys::fuzz_target;
use tendon_hand::actuation::parse_script;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(entries) = parse_script(text) {
        assert!(entries.windows(2).all(|w| w[0].time <= w[1].time));
    }
});
