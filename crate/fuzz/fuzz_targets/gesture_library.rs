#![no_main]

use libfuzzer_sys::fuzz_target;
use tendon_hand::hand_model::default_hand_spec;
use tendon_hand::posture::{check_gesture, load_gesture_library};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(gestures) = load_gesture_library(text) {
        let spec = default_hand_spec();
        for g in &gestures {
            let _ = check_gesture(&spec, g);
        }
    }
});
