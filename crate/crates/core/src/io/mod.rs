//! File formats: 16-bit PCM WAV, binary PGM, plain CSV signal matrices and
//! benchmark reports.

mod csv_matrix;
mod pgm;
mod report;
mod wav;

pub use csv_matrix::{
    format_csv_rows, parse_csv_rows, read_csv_matrix, read_csv_rows, read_mixing_matrix,
    write_csv_matrix, write_csv_rows,
};
pub use pgm::{encode_pgm, parse_pgm, read_pgm, write_pgm, ImageBuffer};
pub use report::{
    format_report_csv, read_report_json, write_report, write_report_csv, write_report_json,
    REPORT_CSV_HEADER,
};
pub use wav::{read_wav, write_wav, AudioBuffer};
