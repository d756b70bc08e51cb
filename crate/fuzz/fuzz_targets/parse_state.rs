#![no_main]

use libfuzzer_sys::fuzz_target;
use voxfeed_portal::state::parse_state;

fuzz_target!(|data: &[u8]| {
    if let Ok(state) = parse_state(data) {
        // Whatever loads must survive its own round trip.
        let again = serde_json::to_vec(&state).unwrap();
        assert_eq!(parse_state(&again).unwrap(), state);
    }
});
