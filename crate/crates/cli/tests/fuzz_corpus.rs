use std::fs;
use std::path::PathBuf;

use dualspace_cli::commands::{embed_cmd, EmbedInput};
use dualspace_cli::input::{parse_embed_request, parse_matrix_csv, parse_matrix_json, parse_space_id};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

#[test]
fn matrix_seeds() {
    for (name, data) in seeds("parse_matrix_json") {
        assert_eq!(parse_matrix_json(text(&data)).is_ok(), name != "ragged", "{name}");
    }
    for (name, data) in seeds("parse_matrix_csv") {
        assert_eq!(parse_matrix_csv(text(&data)).is_ok(), name != "ragged", "{name}");
    }
}

#[test]
fn space_id_seeds() {
    for (name, data) in seeds("parse_space_id") {
        assert_eq!(parse_space_id(text(&data)).is_ok(), name != "zero", "{name}");
    }
}

#[test]
fn embed_seeds() {
    for (name, data) in seeds("embed_input") {
        let (mode, rest) = data.split_first().unwrap();
        let (space, m) = parse_embed_request(text(rest)).unwrap();
        let input = if mode & 1 == 0 { EmbedInput::Block(m) } else { EmbedInput::Group(m) };
        let result = embed_cmd(space.space().unwrap(), "all", input, 0);
        assert_eq!(result.is_ok(), name != "time_like", "{name}: {:?}", result.err());
    }
}
