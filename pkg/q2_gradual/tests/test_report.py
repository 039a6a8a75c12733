# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import json
import os
import tempfile

import pandas as pd

from q2_gradual._harness import GenConfig, fuzz_campaign
from q2_gradual._report import (VERDICT_ORDER, campaign_report,
                                render_report, totals_frame)
from q2_gradual._util import json_replace
from q2_gradual.tests._base import TestBase


class TestReport(TestBase):
    def setUp(self):
        super().setUp()
        self.report = fuzz_campaign(GenConfig(seed=4, fuel=100, max_size=6),
                                    8)

    def test_totals_frame(self):
        df = totals_frame(self.report)
        self.assertEqual(list(df['verdict']), VERDICT_ORDER)
        self.assertEqual(df['pairs'].sum(), 8)
        self.assertEqual(df.attrs['titles']['pairs'], 'number of pairs')

    def test_render(self):
        with tempfile.TemporaryDirectory() as output_dir:
            render_report(output_dir, self.report)
            with open(os.path.join(output_dir, 'index.html')) as fh:
                html = fh.read()
            with open(os.path.join(output_dir, 'report.json')) as fh:
                report = json.load(fh)
            pairs = pd.read_csv(os.path.join(output_dir, 'pairs.tsv'),
                                sep='\t')
        self.assertIn('vegaEmbed', html)
        self.assertIn('8 pair(s), seed 4, fuel 100.', html)
        self.assertNotIn('REPLACE_PARAM', html)
        self.assertEqual(report['totals'], self.report.totals)
        self.assertEqual(len(pairs), 8)
        self.assertEqual(list(pairs['index']), list(range(8)))

    def test_violations_table(self):
        report = fuzz_campaign(GenConfig(seed=1, fuel=200, max_size=6,
                                         adversarial=True), 60)
        with tempfile.TemporaryDirectory() as output_dir:
            render_report(output_dir, report)
            with open(os.path.join(output_dir, 'index.html')) as fh:
                html = fh.read()
        self.assertIn('<th>swapped</th>', html)
        self.assertEqual(html.count('<td>True</td>'),
                         len(report.violations))

    def test_campaign_report(self):
        with tempfile.TemporaryDirectory() as output_dir:
            campaign_report(output_dir, seed=1, pairs=3, fuel=50,
                            max_size=5)
            self.assertEqual(sorted(os.listdir(output_dir)),
                             ['index.html', 'pairs.tsv', 'report.json'])


class TestJsonReplace(TestBase):
    def test_nested(self):
        spec = {'a': [{'{{REPLACE_PARAM}}': 'x'}, 1],
                'b': {'c': {'{{REPLACE_PARAM}}': 'y'}}}
        self.assertEqual(json_replace(spec, x=[1, 2], y='z'),
                         {'a': [[1, 2], 1], 'b': {'c': 'z'}})

    def test_missing_value(self):
        with self.assertRaises(KeyError):
            json_replace({'{{REPLACE_PARAM}}': 'x'})
