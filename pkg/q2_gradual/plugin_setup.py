# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

from qiime2.plugin import Bool, Int, Plugin, Range

import q2_gradual
import q2_gradual._examples as ex

plugin = Plugin(name='gradual',
                version=q2_gradual.__version__,
                website='https://github.com/qiime2/q2-gradual',
                package='q2_gradual',
                description='This QIIME 2 plugin runs differential tests of'
                            ' the gradual guarantee for the Cast Calculus.',
                short_description='Plugin for gradual guarantee campaigns.')

plugin.visualizers.register_function(
    function=q2_gradual.campaign_report,
    inputs={},
    parameters={'seed': Int % Range(0, None),
                'pairs': Int % Range(0, None),
                'fuel': Int % Range(8, None),
                'max_size': Int % Range(1, None),
                'type_depth': Int % Range(0, None),
                'mutation_budget': Int % Range(0, None),
                'adversarial': Bool},
    parameter_descriptions={
        'seed': 'Seed of the campaign. Every pair gets its own seed spawned'
                ' from this one, so the same seed gives the same report.',
        'pairs': 'The number of precision pairs to generate and judge.',
        'fuel': 'The number of reduction steps each side of a pair may'
                ' take. Pairs with a side that runs out of fuel are'
                ' reported as inconclusive.',
        'max_size': 'The number of constructor choices the generator may'
                    ' spend on the more-precise term of a pair.',
        'type_depth': 'The deepest nesting of function types the'
                      ' generator uses for pair types and arguments.',
        'mutation_budget': 'The number of precision-preserving edits used'
                           ' to make the less-precise term of a pair.',
        'adversarial': 'Also put blame on the more-precise side, and judge'
                       ' the swapped pairs as negative controls that are'
                       ' expected to show violations.',
    },
    name='Gradual guarantee campaign report',
    description='Generates well-typed Cast Calculus programs, makes less'
                ' precise variants of them, runs both and reports how'
                ' many pairs behave as the gradual guarantee requires.',
    examples={
        'campaign_report_default': ex.campaign_report_default
    }
)
