//! Raw SNR draws for external analysis.

use std::io::Write;

use hybrid_secrecy::mc::{apply_blockage, sample_alpha_mu, sample_malaga_snr};

use crate::manifest::Manifest;
use crate::settings::Settings;
use crate::{fmt_num, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    AlphaMu,
    Malaga,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    SourceRelay,
    SourcePrimary,
    SourceEavesdropper,
}

/// α-μ draws for one RF link, or blocked Málaga draws (`blockage_p` from the config).
pub fn draw(settings: &Settings, channel: Channel, link: Link, n: usize, seed: u64) -> CliResult<Vec<f64>> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let c = &settings.loaded.secrecy;
    Ok(match channel {
        Channel::AlphaMu => {
            let ch = match link {
                Link::SourceRelay => &c.rf_sr,
                Link::SourcePrimary => &c.rf_sp,
                Link::SourceEavesdropper => &c.rf_se,
            };
            sample_alpha_mu(ch, n, seed)?
        }
        Channel::Malaga => apply_blockage(&sample_malaga_snr(&c.fso, n, seed)?, c.fso.blockage_p, seed)?,
    })
}

pub fn write_samples(settings: &Settings, xs: &[f64], seed: u64, out: &mut impl Write) -> CliResult<()> {
    Manifest::new("sample", settings, true).with_run(seed, xs.len()).write_line(out)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["gamma"])?;
    for &x in xs {
        w.write_record([fmt_num(x)])?;
    }
    w.flush()?;
    Ok(())
}
