# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import json

PLACEHOLDER = '{{REPLACE_PARAM}}'


def json_replace(json_obj, **values):
    """
    Fill a vega spec template: every `{"{{REPLACE_PARAM}}": "some_key"}`
    object is replaced by `values["some_key"]`.
    """
    if isinstance(json_obj, dict):
        if list(json_obj) == [PLACEHOLDER]:
            key = json_obj[PLACEHOLDER]
            if key not in values:
                raise KeyError('The spec template asks for %r, which was not'
                               ' provided. Provided: %s.'
                               % (key, ', '.join(sorted(values))))
            return values[key]
        return {k: json_replace(v, **values) for k, v in json_obj.items()}
    if isinstance(json_obj, list):
        return [json_replace(x, **values) for x in json_obj]
    return json_obj


def stable_dumps(obj) -> str:
    """JSON with sorted keys, so equal objects give equal bytes."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
