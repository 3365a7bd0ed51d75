def test_import():
    import gradedmodal
