#![no_main]

use libfuzzer_sys::fuzz_target;
use tendon_hand::posture::{load_grasp_classes, save_grasp_classes};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(classes) = load_grasp_classes(text) {
        let again = load_grasp_classes(&save_grasp_classes(&classes)).expect("saved table reloads");
        assert_eq!(again, classes);
    }
});
