#![no_main]

use entbound::io::StateSetFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // parsing and validation must fail cleanly, never panic
    if let Ok(file) = StateSetFile::parse(text) {
        if let Ok(set) = file.to_state_set() {
            let again = entbound::io::write_state_set(&set);
            entbound::io::read_state_set(&again).expect("written sets reload");
        }
    }
});
