"""Embedded canonical benchmark dataset.

Nine models swept over six concurrency levels (8 to 128) against the same
2,993-request medical workload on a dual A800 80G box, with WiNEval-3.0
quality scores. Costs in the table are the published two-decimal figures,
computed from total time at the canonical dual-card rate of 1.58 USD/hour;
`recompute_costs` reproduces them within a cent.
"""

from __future__ import annotations

from functools import lru_cache

from .dataset import ModelCard, Sweep, parse_runs

FIXTURE_DATASET_ID = "wineval3"

#: Canonical dual-card hourly rate (USD) the published cost column is built on.
FIXTURE_HOURLY_USD = 1.58

#: Requests in the workload behind every fixture run.
FIXTURE_REQUEST_COUNT = 2993

_FIXTURE_CSV = """\
model_id,concurrency,request_count,total_time_s,avg_ttft_s,input_tokens,output_tokens,total_tokens,avg_throughput_tok_s,cost_usd
WiNGPT-2.7,8,2993,1386.53,0.119,1347535,344068,1691603,31.02,0.61
WiNGPT-2.7,16,2993,830.37,0.156,1347535,345306,1692841,25.99,0.36
WiNGPT-2.7,32,2993,561.57,0.224,1347535,356912,1704447,19.86,0.25
WiNGPT-2.7,48,2993,461.3,0.295,1347535,344281,1691816,15.55,0.20
WiNGPT-2.7,64,2993,422.36,0.353,1347535,345064,1692599,12.77,0.19
WiNGPT-2.7,128,2993,378.29,0.614,1347535,346518,1694053,7.16,0.17
GLM-4-32B,8,2993,1583.45,0.119,1226578,415190,1641768,32.78,0.69
GLM-4-32B,16,2993,1694.2,0.165,1226578,448842,1675420,16.56,0.74
GLM-4-32B,32,2993,1268.64,0.231,1226578,446399,1672977,16.56,0.56
GLM-4-32B,48,2993,475.83,0.303,1226578,419237,1645815,16.56,0.21
GLM-4-32B,64,2993,422.93,0.373,1226578,410913,1637491,16.56,0.19
GLM-4-32B,128,2993,420.43,0.877,1226578,424935,1651513,16.56,0.18
gpt-oss-20b,8,2993,781.44,0.054,1495464,398621,1894085,63.76,0.34
gpt-oss-20b,16,2993,585.78,0.042,1495464,429743,1925207,45.85,0.26
gpt-oss-20b,32,2993,331.56,0.048,1495464,396885,1892349,37.41,0.15
gpt-oss-20b,48,2993,259.28,0.059,1495464,395878,1891342,31.81,0.11
gpt-oss-20b,64,2993,249.17,0.073,1495464,398699,1894163,25.00,0.11
gpt-oss-20b,128,2993,164.17,0.230,1495464,388587,1884051,18.49,0.07
WiNGPT-3.0,8,2993,13593.47,0.123,1347535,3518378,4865913,32.35,5.96
WiNGPT-3.0,16,2993,7916.62,0.142,1347535,3440393,4787928,27.16,3.47
WiNGPT-3.0,32,2993,6252.95,0.191,1347535,3517540,4865075,17.58,2.74
WiNGPT-3.0,48,2993,5925.54,0.230,1347535,3636012,4983547,12.78,2.60
WiNGPT-3.0,64,2993,5305.93,5.219,1347535,3736644,5084179,11.00,2.33
WiNGPT-3.0,128,2993,4736.77,57.404,1347535,3841930,5189465,6.34,2.08
Seed-OSS-36B,8,2993,2134.78,0.168,1238191,509206,1747397,29.82,0.94
Seed-OSS-36B,16,2993,1255.4,0.222,1238191,513012,1751203,25.54,0.55
Seed-OSS-36B,32,2993,1792.73,0.337,1238191,708137,1946328,12.34,0.79
Seed-OSS-36B,48,2993,671.64,0.410,1238191,506833,1745024,15.72,0.29
Seed-OSS-36B,64,2993,629.68,0.555,1238191,507281,1745472,12.59,0.28
Seed-OSS-36B,128,2993,578.66,1.195,1238191,507014,1745205,6.85,0.25
medgemma-27b,8,2993,5371.46,0.109,1399753,1421097,2820850,33.07,2.36
medgemma-27b,16,2993,3706.2,0.133,1399753,1618060,3017813,27.29,1.63
medgemma-27b,32,2993,2200.62,0.190,1399753,1411583,2811336,20.05,0.97
medgemma-27b,48,2993,2056.75,0.219,1399753,1520875,2920628,15.41,0.90
medgemma-27b,64,2993,2006.41,0.263,1399753,1498920,2898673,11.67,0.88
medgemma-27b,128,2993,1733.44,1.201,1399753,1418759,2818512,6.39,0.76
Mistral-Small,8,2993,1938.63,0.108,2113182,811852,2925034,52.35,0.85
Mistral-Small,16,2993,1117,0.132,2113182,810838,2924020,45.37,0.49
Mistral-Small,32,2993,738.22,0.173,2113182,824301,2937483,34.89,0.32
Mistral-Small,48,2993,630.79,0.224,2113182,811290,2924472,26.79,0.28
Mistral-Small,64,2993,559.2,0.276,2113182,813781,2926963,22.74,0.25
Mistral-Small,128,2993,456.82,0.539,2113182,813335,2926517,13.91,0.20
Qwen3-30B,8,2993,1381.05,0.067,1347535,783226,2130761,70.89,0.61
Qwen3-30B,16,2993,1059.78,0.093,1347535,835127,2182662,49.25,0.47
Qwen3-30B,32,2993,1114.56,0.123,1347535,965555,2313090,27.07,0.49
Qwen3-30B,48,2993,739.24,0.141,1347535,848943,2196478,23.93,0.32
Qwen3-30B,64,2993,616.77,0.168,1347535,790773,2138308,20.03,0.27
Qwen3-30B,128,2993,336.6,0.450,1347535,782911,2130446,18.17,0.15
WiNGPT-3.5,8,2993,2034.05,0.103,1347535,932262,2279797,57.29,0.89
WiNGPT-3.5,16,2993,1098.77,0.117,1347535,762906,2110441,43.40,0.48
WiNGPT-3.5,32,2993,863.7,0.134,1347535,773120,2120655,27.97,0.38
WiNGPT-3.5,48,2993,774.11,0.147,1347535,796836,2144371,21.45,0.34
WiNGPT-3.5,64,2993,599.03,0.163,1347535,714003,2061538,18.62,0.26
WiNGPT-3.5,128,2993,668.04,0.319,1347535,813350,2160885,9.51,0.29
"""

_MODEL_CARDS = (
    ModelCard("WiNGPT-3.5", 30, 76.2),
    ModelCard("Seed-OSS-36B", 36, 72.2),
    ModelCard("WiNGPT-3.0", 32, 69.6, notes="long-form reasoning output"),
    ModelCard("GLM-4-32B", 32, 68.5, notes="served as GLM-4-32B-0414"),
    ModelCard("Qwen3-30B", 30, 66.9),
    ModelCard("WiNGPT-2.7", 32, 65.5),
    ModelCard("Mistral-Small", 24, 59.8),
    ModelCard("gpt-oss-20b", 20, 56.4, notes="low reasoning effort"),
    ModelCard("medgemma-27b", 27, 55.9),
)


@lru_cache(maxsize=1)
def canonical_fixture() -> tuple[tuple[Sweep, ...], tuple[ModelCard, ...]]:
    """The embedded dataset: 9 sweeps of 6 runs each, plus 9 model cards."""
    return tuple(parse_runs(_FIXTURE_CSV, "csv")), _MODEL_CARDS
