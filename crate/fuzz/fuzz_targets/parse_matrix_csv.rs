#![no_main]
use dualspace_cli::input::parse_matrix_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_matrix_csv(text) {
        assert!(m.nrows() > 0 && m.ncols() > 0);
    }
});
