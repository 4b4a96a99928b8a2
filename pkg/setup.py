from setuptools import setup, find_packages

with open("requirements.txt") as f:
    install_requires = [
        line.strip() for line in f.read().splitlines() if line.strip() and not line.startswith("#")
    ]

setup(
    name="hyperlab",
    version="0.0.1",
    description="Noisy first-order optimization experiments and query lower bounds on the hyperbolic plane",
    author="Abhishek",
    author_email="abhishekhiremath4949@gmail.com",
    packages=find_packages(),
    zip_safe=False,
    include_package_data=True,
    install_requires=install_requires,
    extras_require={"dev": ["pytest>=7.4"]},
    entry_points={"console_scripts": ["hyperlab = hyperlab.hyperlab.api.cli:main"]},
    python_requires=">=3.10",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
