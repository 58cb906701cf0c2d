from setuptools import Extension, setup

setup(
    ext_modules=[
        Extension(
            "planarmem._blossom",
            sources=["src/planarmem/_blossom.c"],
            optional=True,  # pure-python fallback exists
        ),
    ]
)
