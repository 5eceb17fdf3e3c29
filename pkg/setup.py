"""uattn setuptools setup.py for pip installations"""
from setuptools import setup

setup(
    name="uattn",
    version="0.1.0",
    install_requires=[
        "numpy",
        "scipy",
        "PyYAML",
        "yamale",
        "Pillow",
    ],
    packages=[
        "uattn",
        "uattn/config",
        "uattn/data",
        "uattn/losses",
        "uattn/metrics",
        "uattn/model",
        "uattn/tensor",
        "uattn/train",
    ],
    entry_points={
        "console_scripts": [
            "uattn = uattn.uattn:main",
        ]
    },
    test_suite="uattn",
    package_data={"uattn": ["*.yaml"]},
)
