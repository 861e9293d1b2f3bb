use modaldoc_cli::{Atom, Block, Document, Entry};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z][a-z0-9_]{0,5}",
        "[a-z][0-9]?->[a-z*][0-9]?",
        Just("*".to_string()),
        Just("½".to_string()),
    ]
}

fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        3 => word().prop_map(Atom::Word),
        1 => prop::collection::vec(word(), 0..4).prop_map(Atom::Set),
    ]
}

fn entry() -> impl Strategy<Value = Entry> {
    (prop::collection::vec("[a-z][a-z0-9-]{0,4}", 1..3), prop::collection::vec(atom(), 0..5)).prop_map(|(key, values)| {
        let key: Vec<&str> = key.iter().map(String::as_str).collect();
        Entry::new(&key, values)
    })
}

fn document() -> impl Strategy<Value = Document> {
    let block = ("[a-z][a-z-]{0,8}", prop::collection::vec(entry(), 0..5));
    prop::collection::vec(block, 0..5).prop_map(|blocks| Document {
        blocks: blocks
            .into_iter()
            .enumerate()
            .map(|(i, (kind, entries))| Block {
                kind,
                name: format!("b{i}"),
                entries,
                line: 0,
            })
            .collect(),
    })
}

proptest! {
    #[test]
    fn parse_inverts_serialize(doc in document()) {
        let text = doc.to_string();
        let back = Document::parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn comments_and_spacing_are_ignored(doc in document()) {
        let noisy: String = doc
            .to_string()
            .lines()
            .map(|l| format!("   {}   # note\n\n", l.replace(": ", " :\t")))
            .collect();
        prop_assert_eq!(Document::parse(&noisy).unwrap(), doc);
    }
}

#[test]
fn bundled_models_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("models");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for p in paths {
        let doc = Document::parse(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(Document::parse(&doc.to_string()).unwrap(), doc, "{}", p.display());
    }
}
