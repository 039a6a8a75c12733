# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------


def campaign_report_default(use):
    viz, = use.action(
        use.UsageAction('gradual', 'campaign_report'),
        use.UsageInputs(
            seed=1,
            pairs=20,
            fuel=200
        ),
        use.UsageOutputNames(
            visualization='campaign_report'
        )
    )

    viz.assert_output_type('Visualization')
