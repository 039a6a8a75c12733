# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import json
import logging
import os
from importlib import resources

import jinja2
import pandas as pd

from q2_gradual._harness import CampaignReport, GenConfig, fuzz_campaign
from q2_gradual._util import json_replace

logger = logging.getLogger(__name__)

VERDICT_ORDER = ['consistent', 'inconclusive', 'violation']


def totals_frame(report: CampaignReport) -> pd.DataFrame:
    totals = report.totals
    df = pd.DataFrame({'verdict': VERDICT_ORDER,
                       'pairs': [totals[v] for v in VERDICT_ORDER]})
    # column attrs do not survive column access under copy-on-write
    df.attrs['titles'] = {'verdict': 'verdict', 'pairs': 'number of pairs'}
    return df


def render_report(output_dir: str, report: CampaignReport):
    J_ENV = jinja2.Environment(
        loader=jinja2.PackageLoader('q2_gradual', 'assets'),
        autoescape=jinja2.select_autoescape(['html'])
    )
    data = totals_frame(report)
    x_label, y_label = 'verdict', 'pairs'
    title = 'Verdicts over %d pairs' % len(report.records)

    spec_text = resources.files('q2_gradual').joinpath(
        'assets', 'spec.json').read_text()
    full_spec = json_replace(
        json.loads(spec_text),
        data=json.loads(data.to_json(orient='records')),
        x_label=x_label, x_label_name=data.attrs['titles'][x_label],
        y_label=y_label, y_label_name=data.attrs['titles'][y_label],
        title=title, order={'order': 'ascending'})

    index = J_ENV.get_template('index.html')
    config = report.config
    with open(os.path.join(output_dir, 'index.html'), 'w') as fh:
        fh.write(index.render(spec=json.dumps(full_spec),
                              pairs=len(report.records),
                              seed=config.get('seed'),
                              fuel=config.get('fuel'),
                              violations=report.violations))
    with open(os.path.join(output_dir, 'report.json'), 'w') as fh:
        fh.write(report.to_json())
    report.to_dataframe().to_csv(os.path.join(output_dir, 'pairs.tsv'),
                                 sep='\t', index=False)


def campaign_report(output_dir: str, seed: int = 0, pairs: int = 100,
                    fuel: int = 1000, max_size: int = 12,
                    type_depth: int = 2, mutation_budget: int = 3,
                    adversarial: bool = False):
    cfg = GenConfig(seed=seed, fuel=fuel, max_size=max_size,
                    type_depth=type_depth, mutation_budget=mutation_budget,
                    adversarial=adversarial)
    report = fuzz_campaign(cfg, pairs)
    logger.info('writing campaign report to %s', output_dir)
    render_report(output_dir, report)
