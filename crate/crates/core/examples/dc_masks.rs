//! Don't-care masks generated for each command, and how padding widens the
//! location window of a PREDICT_FEATURE query.

use nertcam::preprocess::{build_dc, padding_window};
use nertcam::{MacroCommand, PaddingMode, Sdr, SdrLayout, SectionVec};

fn main() {
    let layout = SdrLayout::new(3, 3, 3).unwrap();
    let triplet = Sdr::parse("100|010|001", &layout).unwrap();
    let pair = Sdr::parse("100|010|000", &layout).unwrap();
    let commands = [
        MacroCommand::store(triplet.clone()),
        MacroCommand::delete(triplet),
        MacroCommand::infer(pair),
        MacroCommand::predict_feature(Sdr::parse("000|010|000", &layout).unwrap(), 0),
        MacroCommand::predict_location(Sdr::parse("100|000|000", &layout).unwrap()),
    ];
    println!("{:<18} {:<11} dc", "command", "input");
    for cmd in &commands {
        let dc = build_dc(cmd, &layout, PaddingMode::Linear1D);
        println!(
            "{:<18} {} {}",
            cmd.kind.to_string(),
            cmd.input.to_sectioned_string(&layout),
            dc
        );
    }

    println!("\nlinear padding around 0000100000:");
    let loc = SectionVec::parse("0000100000").unwrap();
    for p in 0..4 {
        println!("  p={p}  {}", padding_window(&loc, p, PaddingMode::Linear1D));
    }

    println!("\ngrid padding around the centre of a 5x5 grid, p=1:");
    let centre = SectionVec::one_hot(25, 12).unwrap();
    let window = padding_window(&centre, 1, PaddingMode::Grid2D { rows: 5, cols: 5 }).to_string();
    for row in window.as_bytes().chunks(5) {
        println!("  {}", std::str::from_utf8(row).unwrap());
    }
}
