#![no_main]

use libfuzzer_sys::fuzz_target;
use tendon_hand::hand_model::{load_spec, save_spec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = load_spec(text) {
        // anything accepted must survive a save/load cycle unchanged
        let again = load_spec(&save_spec(&spec)).expect("saved spec reloads");
        assert_eq!(again, spec);
    }
});
