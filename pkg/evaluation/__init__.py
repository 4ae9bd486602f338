from .descriptors import (
    clustering_descriptor,
    degree_descriptor,
    describe,
    laplacian_spectrum,
    max_degree_bound,
    spectrum_descriptor,
)
from .mmd import SIGMAS, RbfKernel, mmd_biased, mmd_max_over_sigma, rbf_kernel, squared_distances
from .model import DESCRIPTOR_KINDS, DescriptorHistogram, DescriptorScore, MmdReport
from .report import (
    REPORT_KV_NAME,
    REPORT_TABLE_NAME,
    er_baseline,
    evaluate,
    format_key_values,
    format_table,
    sample_er_baseline,
    write_report,
)

__all__ = [
    "DESCRIPTOR_KINDS",
    "DescriptorHistogram",
    "DescriptorScore",
    "MmdReport",
    "REPORT_KV_NAME",
    "REPORT_TABLE_NAME",
    "RbfKernel",
    "SIGMAS",
    "clustering_descriptor",
    "degree_descriptor",
    "describe",
    "er_baseline",
    "evaluate",
    "format_key_values",
    "format_table",
    "laplacian_spectrum",
    "max_degree_bound",
    "mmd_biased",
    "mmd_max_over_sigma",
    "rbf_kernel",
    "sample_er_baseline",
    "spectrum_descriptor",
    "squared_distances",
    "write_report",
]
