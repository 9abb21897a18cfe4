#![no_main]
use dualspace_cli::input::parse_space_id;
use libfuzzer_sys::fuzz_target;

// A parsed id must print back to an id that parses to the same space.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(space) = parse_space_id(text) {
        let printed = space.to_string();
        let again = parse_space_id(&printed).expect("printed id parses");
        assert_eq!(again.to_string(), printed);
    }
});
